#include "alkam/lambda_syntax.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace alkam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int cmp3(std::size_t a, std::size_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

// ------------------------------- raw terms -------------------------------

AlgPtr mk_var(std::string name) {
  return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::Var{std::move(name)}});
}
AlgPtr mk_c0() { return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::C0{}}); }
AlgPtr mk_zero() { return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::Zero{}}); }
AlgPtr mk_abs(std::string var, AlgPtr body) {
  return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::Abs{std::move(var), std::move(body)}});
}
AlgPtr mk_app(AlgPtr fun, AlgPtr arg) {
  return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::App{std::move(fun), std::move(arg)}});
}
AlgPtr mk_scale(Scalar factor, AlgPtr term) {
  return std::make_shared<const AlgTerm>(
      AlgTerm{AlgTerm::Scale{std::move(factor), std::move(term)}});
}
AlgPtr mk_sum(AlgPtr lhs, AlgPtr rhs) {
  return std::make_shared<const AlgTerm>(AlgTerm{AlgTerm::Sum{std::move(lhs), std::move(rhs)}});
}

namespace {

void free_vars_rec(const AlgPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const AlgTerm::Var& v) {
                   if (!bound.count(v.name)) out.insert(v.name);
                 },
                 [&](const AlgTerm::C0&) {},
                 [&](const AlgTerm::Zero&) {},
                 [&](const AlgTerm::Abs& a) {
                   const bool fresh = bound.insert(a.var).second;
                   free_vars_rec(a.body, bound, out);
                   if (fresh) bound.erase(a.var);
                 },
                 [&](const AlgTerm::App& a) {
                   free_vars_rec(a.fun, bound, out);
                   free_vars_rec(a.arg, bound, out);
                 },
                 [&](const AlgTerm::Scale& s) { free_vars_rec(s.term, bound, out); },
                 [&](const AlgTerm::Sum& s) {
                   free_vars_rec(s.lhs, bound, out);
                   free_vars_rec(s.rhs, bound, out);
                 },
             },
             t->node);
}

}  // namespace

std::set<std::string> free_vars(const AlgPtr& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

void collect_names(const AlgPtr& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const AlgTerm::Var& v) { out.insert(v.name); },
                 [&](const AlgTerm::C0&) {},
                 [&](const AlgTerm::Zero&) {},
                 [&](const AlgTerm::Abs& a) {
                   out.insert(a.var);
                   collect_names(a.body, out);
                 },
                 [&](const AlgTerm::App& a) {
                   collect_names(a.fun, out);
                   collect_names(a.arg, out);
                 },
                 [&](const AlgTerm::Scale& s) { collect_names(s.term, out); },
                 [&](const AlgTerm::Sum& s) {
                   collect_names(s.lhs, out);
                   collect_names(s.rhs, out);
                 },
             },
             t->node);
}

std::size_t term_size(const AlgPtr& t) {
  return std::visit(overloaded{
                        [&](const AlgTerm::Var&) -> std::size_t { return 1; },
                        [&](const AlgTerm::C0&) -> std::size_t { return 1; },
                        [&](const AlgTerm::Zero&) -> std::size_t { return 1; },
                        [&](const AlgTerm::Abs& a) -> std::size_t { return 2 + term_size(a.body); },
                        [&](const AlgTerm::App& a) -> std::size_t {
                          return 1 + term_size(a.fun) + term_size(a.arg);
                        },
                        [&](const AlgTerm::Scale& s) -> std::size_t { return 1 + term_size(s.term); },
                        [&](const AlgTerm::Sum& s) -> std::size_t {
                          return 1 + term_size(s.lhs) + term_size(s.rhs);
                        },
                    },
                    t->node);
}

namespace {

using Binding = std::vector<std::string>;

std::optional<std::size_t> level_of(const Binding& ctx, const std::string& name) {
  for (std::size_t i = ctx.size(); i-- > 0;)
    if (ctx[i] == name) return i;
  return std::nullopt;
}

bool alg_alpha_eq(const AlgPtr& a, const AlgPtr& b, Binding& ca, Binding& cb) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const AlgTerm::Var& v) {
            const auto& w = std::get<AlgTerm::Var>(b->node);
            const auto la = level_of(ca, v.name), lb = level_of(cb, w.name);
            if (la.has_value() != lb.has_value()) return false;
            return la ? *la == *lb : v.name == w.name;
          },
          [&](const AlgTerm::C0&) { return true; },
          [&](const AlgTerm::Zero&) { return true; },
          [&](const AlgTerm::Abs& x) {
            const auto& y = std::get<AlgTerm::Abs>(b->node);
            ca.push_back(x.var);
            cb.push_back(y.var);
            const bool r = alg_alpha_eq(x.body, y.body, ca, cb);
            ca.pop_back();
            cb.pop_back();
            return r;
          },
          [&](const AlgTerm::App& x) {
            const auto& y = std::get<AlgTerm::App>(b->node);
            return alg_alpha_eq(x.fun, y.fun, ca, cb) && alg_alpha_eq(x.arg, y.arg, ca, cb);
          },
          [&](const AlgTerm::Scale& x) {
            const auto& y = std::get<AlgTerm::Scale>(b->node);
            return eq(x.factor, y.factor) && alg_alpha_eq(x.term, y.term, ca, cb);
          },
          [&](const AlgTerm::Sum& x) {
            const auto& y = std::get<AlgTerm::Sum>(b->node);
            return alg_alpha_eq(x.lhs, y.lhs, ca, cb) && alg_alpha_eq(x.rhs, y.rhs, ca, cb);
          },
      },
      a->node);
}

}  // namespace

bool alpha_eq(const AlgPtr& a, const AlgPtr& b) {
  Binding ca, cb;
  return alg_alpha_eq(a, b, ca, cb);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (unsigned k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

AlgPtr subst(const AlgPtr& t, const std::string& x, const AlgPtr& u) {
  return std::visit(
      overloaded{
          [&](const AlgTerm::Var& v) { return v.name == x ? u : t; },
          [&](const AlgTerm::C0&) { return t; },
          [&](const AlgTerm::Zero&) { return t; },
          [&](const AlgTerm::Abs& a) {
            if (a.var == x) return t;
            const std::set<std::string> fu = free_vars(u);
            if (fu.count(a.var)) {
              std::set<std::string> avoid = fu;
              collect_names(a.body, avoid);
              avoid.insert(x);
              const std::string nv = fresh_name(a.var, avoid);
              const AlgPtr renamed = subst(a.body, a.var, mk_var(nv));
              return mk_abs(nv, subst(renamed, x, u));
            }
            return mk_abs(a.var, subst(a.body, x, u));
          },
          [&](const AlgTerm::App& a) { return mk_app(subst(a.fun, x, u), subst(a.arg, x, u)); },
          [&](const AlgTerm::Scale& s) { return mk_scale(s.factor, subst(s.term, x, u)); },
          [&](const AlgTerm::Sum& s) {
            return mk_sum(subst(s.lhs, x, u), subst(s.rhs, x, u));
          },
      },
      t->node);
}

// ----------------------------- canonical forms -----------------------------

BasePtr mk_bvar(std::string name) {
  return std::make_shared<const BaseTerm>(BaseTerm{BaseTerm::Var{std::move(name)}});
}
BasePtr mk_bc0() { return std::make_shared<const BaseTerm>(BaseTerm{BaseTerm::C0{}}); }
BasePtr mk_babs(std::string var, BasePtr body) {
  return std::make_shared<const BaseTerm>(BaseTerm{BaseTerm::Abs{std::move(var), std::move(body)}});
}
BasePtr mk_bapp(BasePtr fun, CanonicalTerm arg) {
  return std::make_shared<const BaseTerm>(BaseTerm{BaseTerm::App{std::move(fun), std::move(arg)}});
}

namespace {

int cmp_base(const BasePtr& a, const BasePtr& b, Binding& ca, Binding& cb);

// Comparing formal sums under binders cannot rely on the stored entry order:
// that order treats outer-bound names as free spellings, and two alpha-equal
// sums under different spellings may store their entries in different
// relative positions. Re-sort each side under its own context first.
int cmp_canon(const CanonicalTerm& a, const CanonicalTerm& b, Binding& ca, Binding& cb) {
  if (ca.empty() && cb.empty()) {
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    for (; ia != a.entries().end() && ib != b.entries().end(); ++ia, ++ib) {
      if (int c = cmp_base(ia->first, ib->first, ca, cb)) return c;
      if (int c = scalar_cmp(ia->second, ib->second)) return c;
    }
    return cmp3(a.size(), b.size());
  }
  using Entry = const std::pair<const BasePtr, Scalar>*;
  auto sorted_view = [](const CanonicalTerm& t, const Binding& ctx) {
    std::vector<Entry> v;
    v.reserve(t.size());
    for (const auto& e : t.entries()) v.push_back(&e);
    std::sort(v.begin(), v.end(), [&](Entry x, Entry y) {
      Binding c1 = ctx, c2 = ctx;
      if (int c = cmp_base(x->first, y->first, c1, c2)) return c < 0;
      return scalar_cmp(x->second, y->second) < 0;
    });
    return v;
  };
  const auto va = sorted_view(a, ca);
  const auto vb = sorted_view(b, cb);
  for (std::size_t i = 0; i < va.size() && i < vb.size(); ++i) {
    if (int c = cmp_base(va[i]->first, vb[i]->first, ca, cb)) return c;
    if (int c = scalar_cmp(va[i]->second, vb[i]->second)) return c;
  }
  return cmp3(va.size(), vb.size());
}

int cmp_base(const BasePtr& a, const BasePtr& b, Binding& ca, Binding& cb) {
  if (a.get() == b.get() && ca == cb) return 0;
  if (a->node.index() != b->node.index()) return cmp3(a->node.index(), b->node.index());
  return std::visit(
      overloaded{
          [&](const BaseTerm::Var& v) {
            const auto& w = std::get<BaseTerm::Var>(b->node);
            const auto la = level_of(ca, v.name), lb = level_of(cb, w.name);
            if (la.has_value() != lb.has_value()) return la.has_value() ? -1 : 1;
            if (la) return cmp3(*la, *lb);
            const int c = v.name.compare(w.name);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
          },
          [&](const BaseTerm::C0&) { return 0; },
          [&](const BaseTerm::Abs& x) {
            const auto& y = std::get<BaseTerm::Abs>(b->node);
            ca.push_back(x.var);
            cb.push_back(y.var);
            const int c = cmp_base(x.body, y.body, ca, cb);
            ca.pop_back();
            cb.pop_back();
            return c;
          },
          [&](const BaseTerm::App& x) {
            const auto& y = std::get<BaseTerm::App>(b->node);
            if (int c = cmp_base(x.fun, y.fun, ca, cb)) return c;
            return cmp_canon(x.arg, y.arg, ca, cb);
          },
      },
      a->node);
}

}  // namespace

bool BaseAlphaLess::operator()(const BasePtr& a, const BasePtr& b) const {
  Binding ca, cb;
  return cmp_base(a, b, ca, cb) < 0;
}

int alpha_cmp(const BasePtr& a, const BasePtr& b) {
  Binding ca, cb;
  return cmp_base(a, b, ca, cb);
}

int alpha_cmp(const CanonicalTerm& a, const CanonicalTerm& b) {
  Binding ca, cb;
  return cmp_canon(a, b, ca, cb);
}

bool alpha_eq(const BasePtr& a, const BasePtr& b) { return alpha_cmp(a, b) == 0; }

bool canonical_eq(const CanonicalTerm& a, const CanonicalTerm& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  for (; ia != a.entries().end(); ++ia, ++ib) {
    if (alpha_cmp(ia->first, ib->first) != 0) return false;
    if (!eq(ia->second, ib->second)) return false;
  }
  return true;
}

void CanonicalTerm::insert_add(const BasePtr& base, const Scalar& coefficient) {
  if (is_zero(coefficient)) return;
  auto [it, inserted] = entries_.emplace(base, coefficient);
  if (!inserted) {
    it->second = add(it->second, coefficient);
    if (is_zero(it->second)) entries_.erase(it);
  }
}

std::optional<Scalar> CanonicalTerm::coefficient_of(const BasePtr& base) const {
  auto it = entries_.find(base);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

CanonicalTerm canonicalize(const AlgPtr& t, const Semiring& sr) {
  CanonicalTerm out;
  std::visit(overloaded{
                 [&](const AlgTerm::Var& v) { out.insert_add(mk_bvar(v.name), sr.one()); },
                 [&](const AlgTerm::C0&) { out.insert_add(mk_bc0(), sr.one()); },
                 [&](const AlgTerm::Zero&) {},
                 [&](const AlgTerm::Abs& a) {
                   const CanonicalTerm sub = canonicalize(a.body, sr);
                   for (const auto& [b, c] : sub.entries()) out.insert_add(mk_babs(a.var, b), c);
                 },
                 [&](const AlgTerm::App& a) {
                   const CanonicalTerm fun = canonicalize(a.fun, sr);
                   const CanonicalTerm arg = canonicalize(a.arg, sr);
                   for (const auto& [b, c] : fun.entries()) out.insert_add(mk_bapp(b, arg), c);
                 },
                 [&](const AlgTerm::Scale& s) {
                   if (is_zero(s.factor)) return;
                   const CanonicalTerm sub = canonicalize(s.term, sr);
                   for (const auto& [b, c] : sub.entries()) out.insert_add(b, mul(s.factor, c));
                 },
                 [&](const AlgTerm::Sum& s) {
                   const CanonicalTerm l = canonicalize(s.lhs, sr);
                   const CanonicalTerm r = canonicalize(s.rhs, sr);
                   for (const auto& [b, c] : l.entries()) out.insert_add(b, c);
                   for (const auto& [b, c] : r.entries()) out.insert_add(b, c);
                 },
             },
             t->node);
  return out;
}

namespace {

AlgPtr base_to_alg(const BasePtr& b) {
  return std::visit(overloaded{
                        [&](const BaseTerm::Var& v) { return mk_var(v.name); },
                        [&](const BaseTerm::C0&) { return mk_c0(); },
                        [&](const BaseTerm::Abs& a) { return mk_abs(a.var, base_to_alg(a.body)); },
                        [&](const BaseTerm::App& a) {
                          return mk_app(base_to_alg(a.fun), embed(a.arg));
                        },
                    },
                    b->node);
}

}  // namespace

AlgPtr embed(const CanonicalTerm& ct) {
  AlgPtr acc = nullptr;
  for (const auto& [b, c] : ct.entries()) {
    const AlgPtr term = base_to_alg(b);
    const AlgPtr scaled = is_one(c) ? term : mk_scale(c, term);
    acc = acc ? mk_sum(acc, scaled) : scaled;
  }
  return acc ? acc : mk_zero();
}

// ------------------------------ parse / print ------------------------------

namespace {

struct Factor {
  Scalar value;
  bool plain_ident;
  std::string name;
};

struct TermParser {
  const std::string& text;
  const Semiring& sr;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  static bool is_ident_head(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_tail(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
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
  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected ") + what, pos);
  }
  bool at_lambda() {
    skip_ws();
    if (pos < text.size() && text[pos] == '\\') return true;
    return pos + 1 < text.size() && static_cast<unsigned char>(text[pos]) == 0xCE &&
           static_cast<unsigned char>(text[pos + 1]) == 0xBB;
  }
  void eat_lambda() { pos += text[pos] == '\\' ? 1 : 2; }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    if (pos < text.size() && is_ident_head(text[pos])) {
      ++pos;
      while (pos < text.size() && is_ident_tail(text[pos])) ++pos;
    }
    if (pos == start) fail("expected an identifier", start);
    return text.substr(start, pos - start);
  }

  Nat nat() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a number", start);
    return Nat(text.substr(start, pos - start));
  }

  static bool is_reserved(const std::string& w) {
    return w == "c0" || w == "true" || w == "false";
  }

  AlgPtr parse_term() {
    AlgPtr t = parse_summand();
    while (eat('+')) t = mk_sum(t, parse_summand());
    return t;
  }

  std::optional<Factor> try_factor() {
    const std::size_t save = pos;
    skip_ws();
    const std::size_t start = pos;
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Nat n = nat();
      if (peek() == '/') {
        ++pos;
        return Factor{sr.from_ratio(n, nat(), start), false, {}};
      }
      if (n == 0 && peek() != '*') {  // a bare 0 is the zero term, not a coefficient
        pos = save;
        return std::nullopt;
      }
      return Factor{sr.from_nat_literal(n), false, {}};
    }
    if (is_ident_head(c)) {
      const std::string w = ident();
      if (w == "true" || w == "false") {
        if (sr.kind() != SemiringKind::Booleans)
          fail("boolean literal in " + sr.name() + " semiring", start);
        return Factor{Scalar(w == "true"), false, {}};
      }
      if (w == "c0" || !sr.has_indeterminate(w)) {
        pos = save;
        return std::nullopt;
      }
      if (peek() == '^') {
        ++pos;
        const Nat e = nat();
        if (e > 1000000) fail("exponent too large", start);
        return Factor{sr.var_power(w, e.convert_to<unsigned>(), start), false, {}};
      }
      return Factor{sr.var_power(w, 1, start), true, w};
    }
    if (c == '(') {
      // A parenthesized scalar sum, but only when ")*" follows; otherwise it
      // is a parenthesized term and we back off entirely.
      ++pos;
      try {
        const Scalar s = parse_scalar_sum();
        skip_ws();
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          if (peek() == '*') return Factor{s, false, {}};
        }
      } catch (const ParseError&) {
      } catch (const ScalarParseError&) {
      }
      pos = save;
      return std::nullopt;
    }
    pos = save;
    return std::nullopt;
  }

  Scalar parse_scalar_sum() {
    Scalar s = parse_scalar_product();
    while (eat('+')) s = add(s, parse_scalar_product());
    return s;
  }

  Scalar parse_scalar_product() {
    auto f = try_factor();
    if (!f) fail("expected a scalar atom", pos);
    Scalar s = f->value;
    while (true) {
      const std::size_t save = pos;
      if (!eat('*')) break;
      auto g = try_factor();
      if (!g) {
        pos = save;
        break;
      }
      s = mul(s, g->value);
    }
    return s;
  }

  AlgPtr parse_summand() {
    std::vector<Factor> factors;
    while (true) {
      auto f = try_factor();
      if (!f) {
        if (factors.empty()) return parse_abs_or_chain();
        // right after a consumed '*': the scaled term follows
        AlgPtr t = parse_summand();
        return mk_scale(product(factors), t);
      }
      factors.push_back(std::move(*f));
      const std::size_t before_star = pos;
      if (!eat('*')) {
        // chain ended without '*': the last factor must be the term itself
        const Factor last = factors.back();
        if (!last.plain_ident)
          fail("expected '*' and a term after a scalar literal", before_star);
        factors.pop_back();
        const AlgPtr t = mk_var(last.name);
        if (factors.empty()) return t;
        return mk_scale(product(factors), t);
      }
    }
  }

  Scalar product(const std::vector<Factor>& fs) const {
    Scalar s = fs.front().value;
    for (std::size_t i = 1; i < fs.size(); ++i) s = mul(s, fs[i].value);
    return s;
  }

  AlgPtr parse_abs_or_chain() {
    if (at_lambda()) {
      eat_lambda();
      skip_ws();
      const std::size_t at = pos;
      const std::string v = ident();
      if (is_reserved(v)) fail("reserved word '" + v + "' cannot be a binder", at);
      expect('.', "'.' after the binder");
      return mk_abs(v, parse_summand());
    }
    AlgPtr head = parse_head();
    while (auto arg = try_arg()) head = mk_app(head, *arg);
    return head;
  }

  AlgPtr parse_head() {
    skip_ws();
    const std::size_t at = pos;
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const Nat n = nat();
      if (n != 0) fail("a number is not a term (write k*T for a scalar multiple)", at);
      return mk_zero();
    }
    if (is_ident_head(c)) {
      const std::string w = ident();
      if (w == "c0") return mk_c0();
      if (w == "true" || w == "false") fail("reserved word '" + w + "' is not a term", at);
      return mk_var(w);
    }
    if (eat('(')) {
      AlgPtr m = parse_term();
      expect(')', "')'");
      return m;
    }
    fail("expected a term", at);
  }

  std::optional<AlgPtr> try_arg() {
    const char c = peek();
    const std::size_t at = pos;
    if (at_lambda()) return parse_abs_or_chain();
    if (c == '(') {
      ++pos;
      AlgPtr m = parse_term();
      expect(')', "')'");
      return m;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const Nat n = nat();
      if (n != 0) fail("a number is not a term", at);
      return mk_zero();
    }
    if (is_ident_head(c)) {
      const std::string w = ident();
      if (w == "c0") return mk_c0();
      if (w == "true" || w == "false") fail("reserved word '" + w + "' is not a term", at);
      return mk_var(w);
    }
    return std::nullopt;
  }
};

}  // namespace

AlgPtr parse_alg(const std::string& text, const Semiring& sr) {
  TermParser p{text, sr};
  try {
    AlgPtr t = p.parse_term();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input", p.pos);
    return t;
  } catch (const ScalarParseError& e) {
    throw ParseError(e.bare, e.position);
  }
}

namespace {

std::string print_m(const AlgPtr&);

bool is_sum_node(const AlgPtr& t) { return std::holds_alternative<AlgTerm::Sum>(t->node); }
bool is_scale_node(const AlgPtr& t) { return std::holds_alternative<AlgTerm::Scale>(t->node); }

std::string arg_str(const AlgPtr& a) {
  return std::visit(overloaded{
                        [&](const AlgTerm::Var& v) { return v.name; },
                        [&](const AlgTerm::C0&) { return std::string("c0"); },
                        [&](const AlgTerm::Zero&) { return std::string("0"); },
                        [&](const auto&) { return "(" + print_m(a) + ")"; },
                    },
                    a->node);
}

std::string print_s(const AlgPtr& t) {
  return std::visit(
      overloaded{
          [&](const AlgTerm::Var& v) { return v.name; },
          [&](const AlgTerm::C0&) { return std::string("c0"); },
          [&](const AlgTerm::Zero&) { return std::string("0"); },
          [&](const AlgTerm::Scale& s) {
            std::string f = to_string(s.factor);
            if (f.find('+') != std::string::npos) f = "(" + f + ")";
            const bool wrap = is_sum_node(s.term) || is_scale_node(s.term);
            return f + "*" + (wrap ? "(" + print_m(s.term) + ")" : print_s(s.term));
          },
          [&](const AlgTerm::Abs& a) {
            const bool wrap = is_sum_node(a.body);
            return "\\" + a.var + "." + (wrap ? "(" + print_m(a.body) + ")" : print_s(a.body));
          },
          [&](const AlgTerm::App&) {
            std::vector<AlgPtr> args;
            AlgPtr f = t;
            while (const auto* app = std::get_if<AlgTerm::App>(&f->node)) {
              args.push_back(app->arg);
              f = app->fun;
            }
            std::string out = "(" + print_m(f) + ")";
            for (auto it = args.rbegin(); it != args.rend(); ++it) out += " " + arg_str(*it);
            return out;
          },
          [&](const AlgTerm::Sum&) { return "(" + print_m(t) + ")"; },
      },
      t->node);
}

std::string print_m(const AlgPtr& t) {
  if (const auto* s = std::get_if<AlgTerm::Sum>(&t->node)) {
    // The parser associates '+' to the left, so a right-nested sum keeps its
    // shape only when parenthesized.
    const std::string rhs =
        is_sum_node(s->rhs) ? "(" + print_m(s->rhs) + ")" : print_m(s->rhs);
    return print_m(s->lhs) + " + " + rhs;
  }
  return print_s(t);
}

}  // namespace

std::string to_string(const AlgPtr& t) { return print_m(t); }

std::string to_string(const CanonicalTerm& ct) { return to_string(embed(ct)); }

}  // namespace alkam
