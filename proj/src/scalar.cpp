#include "alkam/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace alkam {

Nat factorial(const Nat& n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative value");
  Nat r = 1;
  for (Nat i = 2; i <= n; ++i) r *= i;
  return r;
}

// ----------------------------- polynomials -----------------------------

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [v, e] : powers) d += e;
  return d;
}

Polynomial Polynomial::constant(const Rat& c) {
  Polynomial p;
  if (c != 0) p.terms.emplace(Monomial{}, c);
  return p;
}

Polynomial Polynomial::indeterminate(const std::string& name, unsigned power) {
  if (power == 0) return constant(1);
  Polynomial p;
  p.terms.emplace(Monomial{{{name, power}}}, Rat(1));
  return p;
}

Rat Polynomial::eval(const std::map<std::string, Rat>& assignment) const {
  Rat total = 0;
  for (const auto& [mono, coeff] : terms) {
    Rat term = coeff;
    for (const auto& [v, e] : mono.powers) {
      const Rat& val = assignment.at(v);
      for (unsigned i = 0; i < e; ++i) term *= val;
    }
    total += term;
  }
  return total;
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [mono, coeff] : b.terms) {
    auto [it, inserted] = r.terms.emplace(mono, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) r.terms.erase(it);
    }
  }
  return r;
}

Polynomial mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      Monomial m = ma;
      for (const auto& [v, e] : mb.powers) m.powers[v] += e;
      auto [it, inserted] = r.terms.emplace(std::move(m), ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) r.terms.erase(it);
      }
    }
  }
  return r;
}

// ------------------------------- scalars -------------------------------

std::string kind_name(SemiringKind k) {
  switch (k) {
    case SemiringKind::Booleans: return "bool";
    case SemiringKind::Naturals: return "nat";
    case SemiringKind::Rationals: return "rational";
    case SemiringKind::Polynomials: return "poly";
  }
  return "?";
}

namespace {

[[noreturn]] void mismatch(const char* op, SemiringKind a, SemiringKind b) {
  throw SemiringMismatch(std::string(op) + ": mixed semirings " + kind_name(a) + " and " +
                         kind_name(b));
}

[[noreturn]] void wrong_kind(const char* want, SemiringKind got) {
  throw SemiringMismatch(std::string("expected a ") + want + " scalar, got " + kind_name(got));
}

std::string rat_str(const Rat& q) {
  const Nat num = boost::multiprecision::numerator(q);
  const Nat den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string mono_str(const Monomial& m) {
  std::string out;
  for (const auto& [v, e] : m.powers) {
    if (!out.empty()) out += "*";
    out += v;
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace

bool Scalar::as_bool() const {
  if (kind() != SemiringKind::Booleans) wrong_kind("bool", kind());
  return std::get<bool>(v_);
}

const Nat& Scalar::as_nat() const {
  if (kind() != SemiringKind::Naturals) wrong_kind("nat", kind());
  return std::get<Nat>(v_);
}

const Rat& Scalar::as_rat() const {
  if (kind() != SemiringKind::Rationals) wrong_kind("rational", kind());
  return std::get<Rat>(v_);
}

const Polynomial& Scalar::as_poly() const {
  if (kind() != SemiringKind::Polynomials) wrong_kind("poly", kind());
  return std::get<Polynomial>(v_);
}

Scalar add(const Scalar& a, const Scalar& b) {
  if (a.kind() != b.kind()) mismatch("add", a.kind(), b.kind());
  switch (a.kind()) {
    case SemiringKind::Booleans: return Scalar(a.as_bool() || b.as_bool());
    case SemiringKind::Naturals: return Scalar(Nat(a.as_nat() + b.as_nat()));
    case SemiringKind::Rationals: return Scalar(Rat(a.as_rat() + b.as_rat()));
    case SemiringKind::Polynomials: return Scalar(add(a.as_poly(), b.as_poly()));
  }
  throw std::logic_error("unreachable");
}

Scalar mul(const Scalar& a, const Scalar& b) {
  if (a.kind() != b.kind()) mismatch("mul", a.kind(), b.kind());
  switch (a.kind()) {
    case SemiringKind::Booleans: return Scalar(a.as_bool() && b.as_bool());
    case SemiringKind::Naturals: return Scalar(Nat(a.as_nat() * b.as_nat()));
    case SemiringKind::Rationals: return Scalar(Rat(a.as_rat() * b.as_rat()));
    case SemiringKind::Polynomials: return Scalar(mul(a.as_poly(), b.as_poly()));
  }
  throw std::logic_error("unreachable");
}

bool eq(const Scalar& a, const Scalar& b) {
  if (a.kind() != b.kind()) mismatch("eq", a.kind(), b.kind());
  switch (a.kind()) {
    case SemiringKind::Booleans: return a.as_bool() == b.as_bool();
    case SemiringKind::Naturals: return a.as_nat() == b.as_nat();
    case SemiringKind::Rationals: return a.as_rat() == b.as_rat();
    case SemiringKind::Polynomials: return a.as_poly() == b.as_poly();
  }
  throw std::logic_error("unreachable");
}

bool is_zero(const Scalar& a) {
  switch (a.kind()) {
    case SemiringKind::Booleans: return !a.as_bool();
    case SemiringKind::Naturals: return a.as_nat() == 0;
    case SemiringKind::Rationals: return a.as_rat() == 0;
    case SemiringKind::Polynomials: return a.as_poly().is_zero();
  }
  throw std::logic_error("unreachable");
}

bool is_one(const Scalar& a) {
  switch (a.kind()) {
    case SemiringKind::Booleans: return a.as_bool();
    case SemiringKind::Naturals: return a.as_nat() == 1;
    case SemiringKind::Rationals: return a.as_rat() == 1;
    case SemiringKind::Polynomials: {
      const auto& t = a.as_poly().terms;
      return t.size() == 1 && t.begin()->first.powers.empty() && t.begin()->second == 1;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

template <typename T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int scalar_cmp(const Scalar& a, const Scalar& b) {
  if (a.kind() != b.kind())
    return cmp3(static_cast<int>(a.kind()), static_cast<int>(b.kind()));
  switch (a.kind()) {
    case SemiringKind::Booleans: return cmp3(a.as_bool(), b.as_bool());
    case SemiringKind::Naturals: return cmp3(a.as_nat(), b.as_nat());
    case SemiringKind::Rationals: return cmp3(a.as_rat(), b.as_rat());
    case SemiringKind::Polynomials: {
      const auto& ta = a.as_poly().terms;
      const auto& tb = b.as_poly().terms;
      auto ia = ta.begin();
      auto ib = tb.begin();
      for (; ia != ta.end() && ib != tb.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        if (int c = cmp3(ia->second, ib->second)) return c;
      }
      return cmp3(ta.size(), tb.size());
    }
  }
  throw std::logic_error("unreachable");
}

Scalar pow(const Scalar& base, const Nat& exponent) {
  if (exponent < 0) throw std::invalid_argument("pow: negative exponent");
  Scalar result = [&] {
    switch (base.kind()) {
      case SemiringKind::Booleans: return Scalar(true);
      case SemiringKind::Naturals: return Scalar(Nat(1));
      case SemiringKind::Rationals: return Scalar(Rat(1));
      case SemiringKind::Polynomials: return Scalar(Polynomial::constant(1));
    }
    throw std::logic_error("unreachable");
  }();
  Scalar b = base;
  Nat e = exponent;
  while (e > 0) {
    if ((e & 1) != 0) result = mul(result, b);
    e >>= 1;
    if (e > 0) b = mul(b, b);
  }
  return result;
}

Scalar div_by_nat(const Scalar& a, const Nat& n) {
  if (n <= 0) throw std::invalid_argument("div_by_nat: divisor must be a positive natural");
  switch (a.kind()) {
    case SemiringKind::Booleans:
      return a;  // every positive natural embeds to true, the multiplicative unit
    case SemiringKind::Naturals: {
      const Nat& v = a.as_nat();
      if (v % n != 0)
        throw NotDivisible(v.str() + " is not divisible by " + n.str() + " over nat");
      return Scalar(Nat(v / n));
    }
    case SemiringKind::Rationals:
      return Scalar(Rat(a.as_rat() / Rat(n)));
    case SemiringKind::Polynomials: {
      Polynomial r = a.as_poly();
      for (auto& [mono, coeff] : r.terms) coeff /= Rat(n);
      return Scalar(std::move(r));
    }
  }
  throw std::logic_error("unreachable");
}

std::string to_string(const Scalar& a) {
  switch (a.kind()) {
    case SemiringKind::Booleans: return a.as_bool() ? "true" : "false";
    case SemiringKind::Naturals: return a.as_nat().str();
    case SemiringKind::Rationals: return rat_str(a.as_rat());
    case SemiringKind::Polynomials: {
      const Polynomial& p = a.as_poly();
      if (p.terms.empty()) return "0";
      std::vector<const std::pair<const Monomial, Rat>*> order;
      order.reserve(p.terms.size());
      for (const auto& t : p.terms) order.push_back(&t);
      std::sort(order.begin(), order.end(), [](const auto* x, const auto* y) {
        const unsigned dx = x->first.degree(), dy = y->first.degree();
        if (dx != dy) return dx > dy;
        return x->first < y->first;
      });
      std::string out;
      for (const auto* t : order) {
        if (!out.empty()) out += " + ";
        const std::string m = mono_str(t->first);
        if (m.empty()) {
          out += rat_str(t->second);
        } else if (t->second == 1) {
          out += m;
        } else {
          out += rat_str(t->second) + "*" + m;
        }
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

// ------------------------------ semirings ------------------------------

Semiring Semiring::booleans() { return Semiring(SemiringKind::Booleans, "bool", {}); }
Semiring Semiring::naturals() { return Semiring(SemiringKind::Naturals, "nat", {}); }
Semiring Semiring::rationals() { return Semiring(SemiringKind::Rationals, "rational", {}); }

Semiring Semiring::polynomials(std::vector<std::string> indeterminates) {
  std::string name = "poly[";
  for (std::size_t i = 0; i < indeterminates.size(); ++i) {
    if (i) name += ",";
    name += indeterminates[i];
  }
  name += "]";
  return Semiring(SemiringKind::Polynomials, std::move(name), std::move(indeterminates));
}

bool Semiring::has_indeterminate(const std::string& v) const {
  return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
}

Scalar Semiring::zero() const {
  switch (kind_) {
    case SemiringKind::Booleans: return Scalar(false);
    case SemiringKind::Naturals: return Scalar(Nat(0));
    case SemiringKind::Rationals: return Scalar(Rat(0));
    case SemiringKind::Polynomials: return Scalar(Polynomial{});
  }
  throw std::logic_error("unreachable");
}

Scalar Semiring::one() const { return nat_embed(1); }

Scalar Semiring::nat_embed(const Nat& n) const {
  switch (kind_) {
    case SemiringKind::Booleans: return Scalar(n > 0);
    case SemiringKind::Naturals: return Scalar(n);
    case SemiringKind::Rationals: return Scalar(Rat(n));
    case SemiringKind::Polynomials: return Scalar(Polynomial::constant(Rat(n)));
  }
  throw std::logic_error("unreachable");
}

Scalar Semiring::from_bool_literal(bool b) const {
  if (kind_ != SemiringKind::Booleans)
    throw SemiringMismatch("boolean literal in " + name_ + " semiring");
  return Scalar(b);
}

Scalar Semiring::from_ratio(const Nat& numerator, const Nat& denominator, std::size_t pos) const {
  if (denominator == 0) throw ScalarParseError("zero denominator", pos);
  switch (kind_) {
    case SemiringKind::Rationals: return Scalar(Rat(numerator, denominator));
    case SemiringKind::Polynomials: return Scalar(Polynomial::constant(Rat(numerator, denominator)));
    default: throw ScalarParseError("ratio literal in " + name_ + " semiring", pos);
  }
}

Scalar Semiring::var_power(const std::string& name, unsigned power, std::size_t pos) const {
  if (kind_ != SemiringKind::Polynomials)
    throw ScalarParseError("indeterminate '" + name + "' in " + name_ + " semiring", pos);
  if (!has_indeterminate(name))
    throw ScalarParseError("undeclared indeterminate '" + name + "'", pos);
  return Scalar(Polynomial::indeterminate(name, power));
}

namespace {

struct ScalarCursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos == text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  Nat nat() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ScalarParseError("expected a natural number", start);
    return Nat(text.substr(start, pos - start));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (pos < text.size() && head(text[pos])) {
      ++pos;
      while (pos < text.size() && tail(text[pos])) ++pos;
    }
    if (pos == start) throw ScalarParseError("expected an identifier", start);
    return text.substr(start, pos - start);
  }
};

Scalar parse_atom(const Semiring& sr, ScalarCursor& c) {
  c.skip_ws();
  const std::size_t start = c.pos;
  const char ch = c.peek();
  if (std::isdigit(static_cast<unsigned char>(ch))) {
    Nat num = c.nat();
    if (c.eat('/')) return sr.from_ratio(num, c.nat(), start);
    return sr.from_nat_literal(num);
  }
  if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
    std::string word = c.ident();
    if (word == "true" || word == "false") {
      if (sr.kind() != SemiringKind::Booleans)
        throw ScalarParseError("boolean literal in " + sr.name() + " semiring", start);
      return sr.from_bool_literal(word == "true");
    }
    unsigned power = 1;
    if (c.eat('^')) {
      Nat e = c.nat();
      if (e > 1000000) throw ScalarParseError("exponent too large", start);
      power = static_cast<unsigned>(e);
    }
    return sr.var_power(word, power, start);
  }
  throw ScalarParseError("expected a scalar atom", start);
}

Scalar parse_product(const Semiring& sr, ScalarCursor& c) {
  Scalar s = parse_atom(sr, c);
  while (c.eat('*')) s = mul(s, parse_atom(sr, c));
  return s;
}

}  // namespace

Scalar Semiring::parse(const std::string& text) const {
  ScalarCursor c{text};
  Scalar s = parse_product(*this, c);
  while (c.eat('+')) s = add(s, parse_product(*this, c));
  if (!c.at_end()) throw ScalarParseError("unexpected trailing input", c.pos);
  return s;
}

}  // namespace alkam
