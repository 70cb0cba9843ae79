#include "alkam/taylor.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>

#include "alkam/qkam.hpp"
#include "alkam/resource_reduction.hpp"

namespace alkam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Matched binder pairs get one shared level; a variable pair agrees when
// both sides are free with the same spelling or bound at the same level.
struct BinderLevels {
  std::map<std::string, int> res, alg;
  int depth = 0;
};

Scalar weigh(const ResPtr& t, const AlgPtr& m, const BinderLevels& lv, const Semiring& sr) {
  if (const auto* sc = std::get_if<AlgTerm::Scale>(&m->node))
    return mul(sc->factor, weigh(t, sc->term, lv, sr));
  if (const auto* su = std::get_if<AlgTerm::Sum>(&m->node))
    return add(weigh(t, su->lhs, lv, sr), weigh(t, su->rhs, lv, sr));
  if (std::holds_alternative<AlgTerm::Zero>(m->node)) return sr.zero();

  return std::visit(
      overloaded{
          [&](const ResTerm::Var& v) {
            const auto* av = std::get_if<AlgTerm::Var>(&m->node);
            if (av == nullptr) return sr.zero();
            const auto rl = lv.res.find(v.name);
            const auto al = lv.alg.find(av->name);
            const int ri = rl == lv.res.end() ? -1 : rl->second;
            const int ai = al == lv.alg.end() ? -1 : al->second;
            if (ri != ai) return sr.zero();
            if (ri == -1 && v.name != av->name) return sr.zero();
            return sr.one();
          },
          [&](const ResTerm::C0&) {
            return std::holds_alternative<AlgTerm::C0>(m->node) ? sr.one() : sr.zero();
          },
          [&](const ResTerm::Abs& a) {
            const auto* aa = std::get_if<AlgTerm::Abs>(&m->node);
            if (aa == nullptr) return sr.zero();
            BinderLevels inner = lv;
            inner.res[a.var] = lv.depth;
            inner.alg[aa->var] = lv.depth;
            ++inner.depth;
            return weigh(a.body, aa->body, inner, sr);
          },
          [&](const ResTerm::App& ap) {
            const auto* aa = std::get_if<AlgTerm::App>(&m->node);
            if (aa == nullptr) return sr.zero();
            Scalar out = weigh(ap.fun, aa->fun, lv, sr);
            for (const auto& [u, count] : ap.arg.items()) {
              if (is_zero(out)) break;
              out = mul(out, pow(weigh(u, aa->arg, lv, sr), count));
            }
            return out;
          },
      },
      t->node);
}

// Candidate annotations for the support: every application in M widens into
// all bag sizes the remaining budget admits. Weights are ignored here; the
// coefficient pass scores (and discards) afterwards.
struct CandidateEnum {
  int bound;
  std::map<std::pair<const AlgTerm*, int>, std::vector<ResPtr>> term_memo;
  std::map<std::pair<const AlgTerm*, int>, std::vector<Bag>> bag_memo;

  const std::vector<ResPtr>& terms(const AlgPtr& m, int budget) {
    const auto key = std::make_pair(m.get(), budget);
    if (auto it = term_memo.find(key); it != term_memo.end()) return it->second;
    std::set<ResPtr, ResAlphaLess> seen;
    if (budget >= 1)
      std::visit(overloaded{
                     [&](const AlgTerm::Var& v) { seen.insert(mk_rvar(v.name)); },
                     [&](const AlgTerm::C0&) { seen.insert(mk_rc0()); },
                     [&](const AlgTerm::Zero&) {},
                     [&](const AlgTerm::Scale& sc) {
                       for (const auto& t : terms(sc.term, budget)) seen.insert(t);
                     },
                     [&](const AlgTerm::Sum& su) {
                       for (const auto& t : terms(su.lhs, budget)) seen.insert(t);
                       for (const auto& t : terms(su.rhs, budget)) seen.insert(t);
                     },
                     [&](const AlgTerm::Abs& a) {
                       for (const auto& b : terms(a.body, budget - 2))
                         seen.insert(mk_rabs(a.var, b));
                     },
                     [&](const AlgTerm::App& ap) {
                       for (const auto& f : terms(ap.fun, budget - 1)) {
                         const int rest = budget - 1 - static_cast<int>(term_size(f));
                         for (const auto& bag : bags(ap.arg, rest))
                           seen.insert(mk_rapp(f, bag));
                       }
                     },
                 },
                 m->node);
    return term_memo[key] = std::vector<ResPtr>(seen.begin(), seen.end());
  }

  const std::vector<Bag>& bags(const AlgPtr& arg, int budget) {
    const auto key = std::make_pair(arg.get(), budget);
    if (auto it = bag_memo.find(key); it != bag_memo.end()) return it->second;
    std::map<Bag, bool, BagAlphaLess> seen;
    seen.emplace(Bag{}, true);
    if (budget >= 1)
      for (int k = 1; k <= budget; ++k)
        for (const auto& item : terms(arg, k)) {
          if (static_cast<int>(term_size(item)) != k) continue;
          for (const auto& rest : bags(arg, budget - k)) {
            Bag grown = rest;
            grown.insert(item);
            seen.emplace(std::move(grown), true);
          }
        }
    std::vector<Bag> out;
    out.reserve(seen.size());
    for (const auto& [bag, unused] : seen) out.push_back(bag);
    return bag_memo[key] = std::move(out);
  }
};

std::vector<Scalar> corpus_coefficients(const Semiring& sr) {
  std::vector<Scalar> out = {sr.one(), sr.nat_embed(2), sr.nat_embed(3)};
  if (sr.kind() == SemiringKind::Rationals) out.push_back(sr.parse("1/2"));
  for (const auto& name : sr.indeterminates()) out.push_back(sr.var_power(name, 1, 0));
  return out;
}

struct CorpusGen {
  std::mt19937_64 eng;
  const Semiring& sr;
  std::vector<Scalar> coeffs;
  std::vector<std::string> binders{"x", "y", "z"};

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }

  AlgPtr closed(int budget, std::vector<std::string> scope) {
    if (budget <= 2) {
      if (!scope.empty() && range(0, 2) > 0) return mk_var(scope[range(0, scope.size() - 1)]);
      return range(0, 1) == 0 ? mk_c0() : mk_abs("u", mk_var("u"));
    }
    switch (range(0, 6)) {
      case 0:
        return closed(2, scope);
      case 1:
      case 2: {
        const std::string v = binders[range(0, binders.size() - 1)];
        auto inner = scope;
        inner.push_back(v);
        return mk_abs(v, closed(budget - 2, inner));
      }
      case 3: {
        const int lb = range(1, budget - 2);
        return mk_app(closed(lb, scope), closed(budget - 1 - lb, scope));
      }
      case 4:
        return mk_scale(coeffs[range(0, coeffs.size() - 1)], closed(budget - 1, scope));
      default: {
        const int lb = range(1, budget - 2);
        return mk_sum(closed(lb, scope), closed(budget - 1 - lb, scope));
      }
    }
  }

  AlgPtr body(int budget) {
    if (budget >= 6 && range(0, 1) == 0) {
      const std::string v = binders[range(0, binders.size() - 1)];
      return mk_app(mk_abs(v, body_under(budget - 4, v)), closed(3, {}));
    }
    return closed(budget, {});
  }

  AlgPtr body_under(int budget, const std::string& v) { return closed(budget, {v}); }
};

}  // namespace

Scalar weight(const ResPtr& t, const AlgPtr& m, const Semiring& sr) {
  return weigh(t, m, BinderLevels{}, sr);
}

Scalar taylor_coeff(const AlgPtr& m, const ResPtr& t, const Semiring& sr) {
  return div_by_nat(weight(t, m, sr), multiplicity(t));
}

Combination taylor_support(const AlgPtr& m, std::size_t max_size, const Semiring& sr) {
  CandidateEnum cands{static_cast<int>(max_size), {}, {}};
  Combination out;
  for (const ResPtr& t : cands.terms(m, cands.bound))
    out.insert_add(t, taylor_coeff(m, t, sr));
  return out;
}

CoefficientReport verify_theorem(const AlgPtr& m, const ResPtr& t, const Semiring& sr) {
  const Scalar lhs = k_hat(m, t, sr);
  const Scalar taylor = taylor_coeff(m, t, sr);
  const Combination nf = normal_form(t, sr);
  const auto at_c0 = nf.coefficient_of(mk_rc0());
  const Scalar nf_c0 = at_c0 ? *at_c0 : sr.zero();
  const Scalar rhs = mul(taylor, nf_c0);
  return CoefficientReport{m, t, lhs, taylor, nf_c0, rhs, eq(lhs, rhs)};
}

std::vector<AlgPtr> generate_corpus(const Semiring& sr, std::uint64_t seed,
                                    std::size_t count, int size_bound) {
  CorpusGen gen{std::mt19937_64(seed), sr, corpus_coefficients(sr)};
  const int budget = size_bound < 3 ? 3 : size_bound;
  std::vector<AlgPtr> out;
  out.reserve(count);
  while (out.size() < count) {
    AlgPtr candidate = gen.body(budget);
    for (int tries = 0; term_size(candidate) > static_cast<std::size_t>(budget) && tries < 64;
         ++tries)
      candidate = gen.body(budget);
    if (term_size(candidate) > static_cast<std::size_t>(budget)) candidate = mk_c0();
    out.push_back(mk_app(std::move(candidate), mk_c0()));
  }
  return out;
}

}  // namespace alkam
