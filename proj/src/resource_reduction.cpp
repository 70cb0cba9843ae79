#include "alkam/resource_reduction.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "alkam/lambda_syntax.hpp"

namespace alkam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void NatCombination::insert_add(const ResPtr& t, const Nat& n) {
  if (n == 0) return;
  auto [it, inserted] = entries_.emplace(t, n);
  if (!inserted) it->second += n;
}

std::optional<Nat> NatCombination::coefficient_of(const ResPtr& t) const {
  auto it = entries_.find(t);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const NatCombination& a, const NatCombination& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto ia = a.entries_.begin();
  for (const auto& [t, n] : b.entries_) {
    if (!alpha_eq(ia->first, t) || ia->second != n) return false;
    ++ia;
  }
  return true;
}

// ----------------------------- substitution -----------------------------

namespace {

ResPtr rename_free(const ResPtr& t, const std::string& from, const std::string& to) {
  return std::visit(overloaded{
                        [&](const ResTerm::Var& v) { return v.name == from ? mk_rvar(to) : t; },
                        [&](const ResTerm::C0&) { return t; },
                        [&](const ResTerm::Abs& a) {
                          if (a.var == from) return t;
                          return mk_rabs(a.var, rename_free(a.body, from, to));
                        },
                        [&](const ResTerm::App& a) {
                          Bag bag;
                          for (const auto& [u, m] : a.arg.items())
                            bag.insert(rename_free(u, from, to), m);
                          return mk_rapp(rename_free(a.fun, from, to), std::move(bag));
                        },
                    },
                    t->node);
}

// Substitutes seq[next++] for the free occurrences of `var`, visiting the
// function before the argument and bag items in storage order, one copy at a
// time. Binders that would capture a free variable of an element are renamed.
ResPtr subst_seq(const ResPtr& s, const std::string& var, const std::vector<ResPtr>& seq,
                 std::size_t& next, const std::set<std::string>& fv_elems,
                 std::set<std::string>& avoid) {
  return std::visit(
      overloaded{
          [&](const ResTerm::Var& v) { return v.name == var ? seq[next++] : s; },
          [&](const ResTerm::C0&) { return s; },
          [&](const ResTerm::Abs& a) {
            if (a.var == var) return s;
            if (fv_elems.count(a.var) && degree(a.body, var) > 0) {
              const std::string w = fresh_name(a.var, avoid);
              avoid.insert(w);
              return mk_rabs(w, subst_seq(rename_free(a.body, a.var, w), var, seq, next,
                                          fv_elems, avoid));
            }
            return mk_rabs(a.var, subst_seq(a.body, var, seq, next, fv_elems, avoid));
          },
          [&](const ResTerm::App& a) {
            ResPtr fun = subst_seq(a.fun, var, seq, next, fv_elems, avoid);
            Bag bag;
            for (const auto& [t, m] : a.arg.items())
              for (Nat i = 0; i < m; ++i)
                bag.insert(subst_seq(t, var, seq, next, fv_elems, avoid));
            return mk_rapp(std::move(fun), std::move(bag));
          },
      },
      s->node);
}

struct SubstContext {
  std::set<std::string> avoid;
  std::set<std::string> fv_elems;
};

SubstContext subst_context(const ResPtr& s, const std::string& var, const Bag& bag) {
  SubstContext cx;
  collect_names(s, cx.avoid);
  collect_names(bag, cx.avoid);
  cx.avoid.insert(var);
  cx.fv_elems = free_vars(bag);
  return cx;
}

}  // namespace

NatCombination linear_subst(const ResPtr& s, const std::string& var, const Bag& bag) {
  NatCombination out;
  if (degree(s, var) != bag.width()) return out;
  const SubstContext cx = subst_context(s, var, bag);

  Nat weight = 1;
  for (const auto& [t, m] : bag.items()) weight *= factorial(m);

  const std::size_t n = bag.width().convert_to<std::size_t>();
  std::vector<std::pair<ResPtr, Nat>> counts(bag.items().begin(), bag.items().end());
  std::vector<ResPtr> seq;
  seq.reserve(n);
  auto rec = [&](auto&& self) -> void {
    if (seq.size() == n) {
      std::size_t next = 0;
      std::set<std::string> avoid = cx.avoid;
      out.insert_add(subst_seq(s, var, seq, next, cx.fv_elems, avoid), weight);
      return;
    }
    for (auto& [t, m] : counts) {
      if (m == 0) continue;
      --m;
      seq.push_back(t);
      self(self);
      seq.pop_back();
      ++m;
    }
  };
  rec(rec);
  return out;
}

NatCombination linear_subst_naive(const ResPtr& s, const std::string& var, const Bag& bag) {
  NatCombination out;
  if (degree(s, var) != bag.width()) return out;
  const SubstContext cx = subst_context(s, var, bag);

  std::vector<ResPtr> elems;
  for (const auto& [t, m] : bag.items())
    for (Nat i = 0; i < m; ++i) elems.push_back(t);
  std::vector<std::size_t> idx(elems.size());
  std::iota(idx.begin(), idx.end(), 0);
  do {
    std::vector<ResPtr> seq;
    seq.reserve(elems.size());
    for (std::size_t j : idx) seq.push_back(elems[j]);
    std::size_t next = 0;
    std::set<std::string> avoid = cx.avoid;
    out.insert_add(subst_seq(s, var, seq, next, cx.fv_elems, avoid), 1);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// ------------------------------- reduction -------------------------------

bool is_normal(const ResPtr& s) {
  return std::visit(overloaded{
                        [&](const ResTerm::Var&) { return true; },
                        [&](const ResTerm::C0&) { return true; },
                        [&](const ResTerm::Abs& a) { return is_normal(a.body); },
                        [&](const ResTerm::App& a) {
                          if (std::holds_alternative<ResTerm::Abs>(a.fun->node)) return false;
                          return is_normal(a.fun) && is_normal(a.arg);
                        },
                    },
                    s->node);
}

bool is_normal(const Bag& b) {
  for (const auto& [t, m] : b.items())
    if (!is_normal(t)) return false;
  return true;
}

namespace {

Bag replace_item(const Bag& bag, std::size_t idx, const ResPtr& u) {
  Bag out;
  const auto& items = bag.items();
  for (std::size_t i = 0; i < items.size(); ++i)
    out.insert(items[i].first, i == idx ? Nat(items[i].second - 1) : items[i].second);
  out.insert(u);
  return out;
}

template <typename Wrap>
std::optional<NatCombination> map_entries(const std::optional<NatCombination>& inner,
                                          Wrap&& wrap) {
  if (!inner) return std::nullopt;
  NatCombination out;
  for (const auto& [u, n] : inner->entries()) out.insert_add(wrap(u), n);
  return out;
}

}  // namespace

std::optional<NatCombination> reduce_step(const ResPtr& s, Strategy strategy) {
  if (const auto* lam = std::get_if<ResTerm::Abs>(&s->node))
    return map_entries(reduce_step(lam->body, strategy),
                       [&](const ResPtr& u) { return mk_rabs(lam->var, u); });
  const auto* app = std::get_if<ResTerm::App>(&s->node);
  if (!app) return std::nullopt;

  auto redex_here = [&]() -> std::optional<NatCombination> {
    const auto* lam = std::get_if<ResTerm::Abs>(&app->fun->node);
    if (!lam) return std::nullopt;
    return linear_subst(lam->body, lam->var, app->arg);
  };
  auto in_fun = [&]() {
    return map_entries(reduce_step(app->fun, strategy),
                       [&](const ResPtr& u) { return mk_rapp(u, app->arg); });
  };
  auto in_bag = [&](bool reversed) -> std::optional<NatCombination> {
    const auto& items = app->arg.items();
    for (std::size_t k = 0; k < items.size(); ++k) {
      const std::size_t i = reversed ? items.size() - 1 - k : k;
      if (auto r = reduce_step(items[i].first, strategy))
        return map_entries(r, [&](const ResPtr& u) {
          return mk_rapp(app->fun, replace_item(app->arg, i, u));
        });
    }
    return std::nullopt;
  };

  if (strategy == Strategy::LeftmostOutermost) {
    if (auto r = redex_here()) return r;
    if (auto r = in_fun()) return r;
    return in_bag(false);
  }
  if (auto r = in_bag(true)) return r;
  if (auto r = in_fun()) return r;
  return redex_here();
}

namespace {

using NfMemo = std::map<ResPtr, NatCombination, ResAlphaLess>;

NatCombination nf_rec(const ResPtr& s, Strategy strategy, NfMemo& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  NatCombination out;
  const auto step = reduce_step(s, strategy);
  if (!step) {
    out.insert_add(s);
  } else {
    for (const auto& [u, n] : step->entries()) {
      const NatCombination sub = nf_rec(u, strategy, memo);
      for (const auto& [v, m] : sub.entries()) out.insert_add(v, n * m);
    }
  }
  memo.emplace(s, out);
  return out;
}

}  // namespace

NatCombination normal_form(const ResPtr& s, Strategy strategy) {
  NfMemo memo;
  return nf_rec(s, strategy, memo);
}

Combination normal_form(const ResPtr& s, const Semiring& sr) {
  Combination out;
  const NatCombination nf = normal_form(s);
  for (const auto& [t, n] : nf.entries()) out.insert_add(t, sr.nat_embed(n));
  return out;
}

BagCombination normal_form(const Bag& b, const Semiring& sr) {
  BagCombination acc;
  acc.insert_add(Bag{}, sr.one());
  for (const auto& [t, m] : b.items()) {
    const Combination nft = normal_form(t, sr);
    for (Nat i = 0; i < m; ++i) {
      BagCombination next;
      for (const auto& [bag, c] : acc.entries())
        for (const auto& [v, d] : nft.entries()) {
          Bag grown = bag;
          grown.insert(v);
          next.insert_add(grown, mul(c, d));
        }
      acc = std::move(next);
    }
  }
  return acc;
}

}  // namespace alkam
