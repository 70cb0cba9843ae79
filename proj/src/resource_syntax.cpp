#include "alkam/resource_syntax.hpp"

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
int cmp3n(const Nat& a, const Nat& b) { return a < b ? -1 : (a > b ? 1 : 0); }

using Binding = std::vector<std::string>;

std::optional<std::size_t> level_of(const Binding& ctx, const std::string& name) {
  for (std::size_t i = ctx.size(); i-- > 0;)
    if (ctx[i] == name) return i;
  return std::nullopt;
}

int cmp_res(const ResPtr& a, const ResPtr& b, Binding& ca, Binding& cb);

// Bags are stored sorted under the empty context; under binders that order
// may disagree between two alpha-equal spellings, so re-sort per side first.
int cmp_bag(const Bag& a, const Bag& b, Binding& ca, Binding& cb) {
  if (ca.empty() && cb.empty()) {
    const auto& ia = a.items();
    const auto& ib = b.items();
    for (std::size_t i = 0; i < ia.size() && i < ib.size(); ++i) {
      if (int c = cmp_res(ia[i].first, ib[i].first, ca, cb)) return c;
      if (int c = cmp3n(ia[i].second, ib[i].second)) return c;
    }
    return cmp3(ia.size(), ib.size());
  }
  auto sorted_view = [](const Bag& t, const Binding& ctx) {
    std::vector<const Bag::Item*> v;
    v.reserve(t.items().size());
    for (const auto& e : t.items()) v.push_back(&e);
    std::sort(v.begin(), v.end(), [&](const Bag::Item* x, const Bag::Item* y) {
      Binding c1 = ctx, c2 = ctx;
      if (int c = cmp_res(x->first, y->first, c1, c2)) return c < 0;
      return x->second < y->second;
    });
    return v;
  };
  const auto va = sorted_view(a, ca);
  const auto vb = sorted_view(b, cb);
  for (std::size_t i = 0; i < va.size() && i < vb.size(); ++i) {
    if (int c = cmp_res(va[i]->first, vb[i]->first, ca, cb)) return c;
    if (int c = cmp3n(va[i]->second, vb[i]->second)) return c;
  }
  return cmp3(va.size(), vb.size());
}

int cmp_res(const ResPtr& a, const ResPtr& b, Binding& ca, Binding& cb) {
  if (a.get() == b.get() && ca == cb) return 0;
  if (a->node.index() != b->node.index()) return cmp3(a->node.index(), b->node.index());
  return std::visit(
      overloaded{
          [&](const ResTerm::Var& v) {
            const auto& w = std::get<ResTerm::Var>(b->node);
            const auto la = level_of(ca, v.name), lb = level_of(cb, w.name);
            if (la.has_value() != lb.has_value()) return la.has_value() ? -1 : 1;
            if (la) return cmp3(*la, *lb);
            const int c = v.name.compare(w.name);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
          },
          [&](const ResTerm::C0&) { return 0; },
          [&](const ResTerm::Abs& x) {
            const auto& y = std::get<ResTerm::Abs>(b->node);
            ca.push_back(x.var);
            cb.push_back(y.var);
            const int c = cmp_res(x.body, y.body, ca, cb);
            ca.pop_back();
            cb.pop_back();
            return c;
          },
          [&](const ResTerm::App& x) {
            const auto& y = std::get<ResTerm::App>(b->node);
            if (int c = cmp_res(x.fun, y.fun, ca, cb)) return c;
            return cmp_bag(x.arg, y.arg, ca, cb);
          },
      },
      a->node);
}

}  // namespace

ResPtr mk_rvar(std::string name) {
  return std::make_shared<const ResTerm>(ResTerm{ResTerm::Var{std::move(name)}});
}
ResPtr mk_rc0() { return std::make_shared<const ResTerm>(ResTerm{ResTerm::C0{}}); }
ResPtr mk_rabs(std::string var, ResPtr body) {
  return std::make_shared<const ResTerm>(ResTerm{ResTerm::Abs{std::move(var), std::move(body)}});
}
ResPtr mk_rapp(ResPtr fun, Bag arg) {
  return std::make_shared<const ResTerm>(ResTerm{ResTerm::App{std::move(fun), std::move(arg)}});
}

int alpha_cmp(const ResPtr& a, const ResPtr& b) {
  Binding ca, cb;
  return cmp_res(a, b, ca, cb);
}

int alpha_cmp(const Bag& a, const Bag& b) {
  Binding ca, cb;
  return cmp_bag(a, b, ca, cb);
}

bool alpha_eq(const ResPtr& a, const ResPtr& b) { return alpha_cmp(a, b) == 0; }
bool alpha_eq(const Bag& a, const Bag& b) { return alpha_cmp(a, b) == 0; }

bool ResAlphaLess::operator()(const ResPtr& a, const ResPtr& b) const {
  return alpha_cmp(a, b) < 0;
}

bool BagAlphaLess::operator()(const Bag& a, const Bag& b) const { return alpha_cmp(a, b) < 0; }

Nat Bag::width() const {
  Nat n = 0;
  for (const auto& [t, m] : items_) n += m;
  return n;
}

void Bag::insert(const ResPtr& t, const Nat& count) {
  if (count < 0) throw std::invalid_argument("bag multiplicity must be non-negative");
  if (count == 0) return;
  auto it = std::lower_bound(items_.begin(), items_.end(), t,
                             [](const Item& item, const ResPtr& key) {
                               return alpha_cmp(item.first, key) < 0;
                             });
  if (it != items_.end() && alpha_cmp(it->first, t) == 0) {
    it->second += count;
  } else {
    items_.insert(it, Item{t, count});
  }
}

namespace {

void free_vars_rec(const ResPtr& t, std::set<std::string>& bound, std::set<std::string>& out);

void free_vars_rec(const Bag& b, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const auto& [t, m] : b.items()) free_vars_rec(t, bound, out);
}

void free_vars_rec(const ResPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const ResTerm::Var& v) {
                   if (!bound.count(v.name)) out.insert(v.name);
                 },
                 [&](const ResTerm::C0&) {},
                 [&](const ResTerm::Abs& a) {
                   const bool fresh = bound.insert(a.var).second;
                   free_vars_rec(a.body, bound, out);
                   if (fresh) bound.erase(a.var);
                 },
                 [&](const ResTerm::App& a) {
                   free_vars_rec(a.fun, bound, out);
                   free_vars_rec(a.arg, bound, out);
                 },
             },
             t->node);
}

}  // namespace

std::set<std::string> free_vars(const ResPtr& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

std::set<std::string> free_vars(const Bag& b) {
  std::set<std::string> bound, out;
  free_vars_rec(b, bound, out);
  return out;
}

void collect_names(const ResPtr& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const ResTerm::Var& v) { out.insert(v.name); },
                 [&](const ResTerm::C0&) {},
                 [&](const ResTerm::Abs& a) {
                   out.insert(a.var);
                   collect_names(a.body, out);
                 },
                 [&](const ResTerm::App& a) {
                   collect_names(a.fun, out);
                   collect_names(a.arg, out);
                 },
             },
             t->node);
}

void collect_names(const Bag& b, std::set<std::string>& out) {
  for (const auto& [t, m] : b.items()) collect_names(t, out);
}

std::size_t term_size(const ResPtr& t) {
  return std::visit(
      overloaded{
          [&](const ResTerm::Var&) -> std::size_t { return 1; },
          [&](const ResTerm::C0&) -> std::size_t { return 1; },
          [&](const ResTerm::Abs& a) -> std::size_t { return 2 + term_size(a.body); },
          [&](const ResTerm::App& a) -> std::size_t { return 1 + term_size(a.fun) + bag_size(a.arg); },
      },
      t->node);
}

std::size_t bag_size(const Bag& b) {
  std::size_t n = 0;
  for (const auto& [t, m] : b.items()) n += m.convert_to<std::size_t>() * term_size(t);
  return n;
}

Nat degree(const ResPtr& t, const std::string& var) {
  return std::visit(overloaded{
                        [&](const ResTerm::Var& v) { return Nat(v.name == var ? 1 : 0); },
                        [&](const ResTerm::C0&) { return Nat(0); },
                        [&](const ResTerm::Abs& a) {
                          return a.var == var ? Nat(0) : degree(a.body, var);
                        },
                        [&](const ResTerm::App& a) {
                          return Nat(degree(a.fun, var) + degree(a.arg, var));
                        },
                    },
                    t->node);
}

Nat degree(const Bag& b, const std::string& var) {
  Nat n = 0;
  for (const auto& [t, m] : b.items()) n += m * degree(t, var);
  return n;
}

Nat multiplicity(const ResPtr& t) {
  return std::visit(overloaded{
                        [](const ResTerm::Var&) { return Nat(1); },
                        [](const ResTerm::C0&) { return Nat(1); },
                        [](const ResTerm::Abs& a) { return multiplicity(a.body); },
                        [](const ResTerm::App& a) {
                          return Nat(multiplicity(a.fun) * multiplicity(a.arg));
                        },
                    },
                    t->node);
}

Nat multiplicity(const Bag& b) {
  Nat n = 1;
  for (const auto& [t, m] : b.items()) {
    for (Nat i = 2; i <= m; ++i) n *= i;
    const Nat mt = multiplicity(t);
    for (Nat i = 0; i < m; ++i) n *= mt;
  }
  return n;
}

Bag bag_union(const Bag& a, const Bag& b) {
  Bag out = a;
  for (const auto& [t, m] : b.items()) out.insert(t, m);
  return out;
}

std::vector<std::pair<Bag, Bag>> bag_splittings(const Bag& t) {
  const auto& items = t.items();
  std::vector<Nat> take(items.size(), 0);
  std::vector<std::pair<Bag, Bag>> out;
  while (true) {
    Bag a, b;
    for (std::size_t i = 0; i < items.size(); ++i) {
      a.insert(items[i].first, take[i]);
      b.insert(items[i].first, items[i].second - take[i]);
    }
    out.emplace_back(std::move(a), std::move(b));
    std::size_t i = 0;
    for (; i < items.size(); ++i) {
      if (take[i] < items[i].second) {
        ++take[i];
        for (std::size_t j = 0; j < i; ++j) take[j] = 0;
        break;
      }
    }
    if (i == items.size()) break;
  }
  return out;
}

void Combination::insert_add(const ResPtr& t, const Scalar& c) {
  if (is_zero(c)) return;
  auto [it, inserted] = entries_.emplace(t, c);
  if (!inserted) {
    it->second = add(it->second, c);
    if (is_zero(it->second)) entries_.erase(it);
  }
}

std::optional<Scalar> Combination::coefficient_of(const ResPtr& t) const {
  auto it = entries_.find(t);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void BagCombination::insert_add(const Bag& b, const Scalar& c) {
  if (is_zero(c)) return;
  auto [it, inserted] = entries_.emplace(b, c);
  if (!inserted) {
    it->second = add(it->second, c);
    if (is_zero(it->second)) entries_.erase(it);
  }
}

std::optional<Scalar> BagCombination::coefficient_of(const Bag& b) const {
  auto it = entries_.find(b);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

// ------------------------------ parse / print ------------------------------

namespace {

struct ResParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
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
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (pos < text.size() && head(text[pos])) {
      ++pos;
      while (pos < text.size() && tail(text[pos])) ++pos;
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

  ResPtr parse_term() {
    skip_ws();
    const std::size_t at = pos;
    if (at_lambda()) {
      eat_lambda();
      skip_ws();
      const std::size_t vat = pos;
      const std::string v = ident();
      if (v == "c0") fail("reserved word 'c0' cannot be a binder", vat);
      expect('.', "'.' after the binder");
      return mk_rabs(v, parse_term());
    }
    if (eat('<')) {
      ResPtr fun = parse_term();
      expect('>', "'>'");
      return mk_rapp(std::move(fun), parse_bag());
    }
    if (eat('(')) {
      ResPtr t = parse_term();
      expect(')', "')'");
      return t;
    }
    const char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::string w = ident();
      if (w == "c0") return mk_rc0();
      return mk_rvar(w);
    }
    fail("expected a resource term", at);
  }

  Bag parse_bag() {
    expect('{', "'{'");
    Bag bag;
    if (eat('}')) return bag;
    while (true) {
      ResPtr item = parse_term();
      Nat mult = 1;
      if (eat('^')) mult = nat();
      bag.insert(item, mult);
      if (eat('}')) return bag;
      expect(',', "',' or '}' in a bag");
    }
  }
};

}  // namespace

ResPtr parse_res(const std::string& text) {
  ResParser p{text};
  ResPtr t = p.parse_term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing input", p.pos);
  return t;
}

std::string to_string(const ResPtr& t) {
  return std::visit(overloaded{
                        [&](const ResTerm::Var& v) { return v.name; },
                        [&](const ResTerm::C0&) { return std::string("c0"); },
                        [&](const ResTerm::Abs& a) { return "\\" + a.var + "." + to_string(a.body); },
                        [&](const ResTerm::App& a) {
                          return "<" + to_string(a.fun) + ">" + to_string(a.arg);
                        },
                    },
                    t->node);
}

std::string to_string(const Bag& b) {
  std::string out = "{";
  bool first = true;
  for (const auto& [t, m] : b.items()) {
    if (!first) out += ",";
    first = false;
    const bool wrap = m > 1 && !std::holds_alternative<ResTerm::Var>(t->node) &&
                      !std::holds_alternative<ResTerm::C0>(t->node);
    out += wrap ? "(" + to_string(t) + ")" : to_string(t);
    if (m > 1) out += "^" + m.str();
  }
  return out + "}";
}

std::string to_string(const Combination& c) {
  if (c.empty()) return "0";
  std::string out;
  for (const auto& [t, coeff] : c.entries()) {
    if (!out.empty()) out += " + ";
    if (is_one(coeff)) {
      out += to_string(t);
    } else {
      std::string s = to_string(coeff);
      if (s.find('+') != std::string::npos) s = "(" + s + ")";
      out += s + "*" + to_string(t);
    }
  }
  return out;
}

}  // namespace alkam
