#pragma once

// Shared deterministic generators for the property tests.

#include <random>
#include <string>
#include <vector>

#include "alkam/lambda_syntax.hpp"
#include "alkam/resource_reduction.hpp"
#include "alkam/resource_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam::testgen {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  int range(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(eng);
  }
  bool coin() { return range(0, 1) == 1; }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(range(0, static_cast<int>(xs.size()) - 1))];
  }
};

inline Scalar random_scalar(Rng& rng, const Semiring& sr) {
  switch (sr.kind()) {
    case SemiringKind::Booleans:
      return Scalar(rng.coin());
    case SemiringKind::Naturals:
      return Scalar(Nat(rng.range(0, 20)));
    case SemiringKind::Rationals:
      return Scalar(Rat(rng.range(0, 20), rng.range(1, 10)));
    case SemiringKind::Polynomials: {
      Scalar acc = sr.zero();
      const int nterms = rng.range(0, 3);
      for (int i = 0; i < nterms; ++i) {
        Scalar term = sr.nat_embed(rng.range(1, 6));
        term = div_by_nat(term, Nat(rng.range(1, 4)));
        for (const auto& v : sr.indeterminates()) {
          const int e = rng.range(0, 2);
          if (e > 0) term = mul(term, sr.var_power(v, static_cast<unsigned>(e), 0));
        }
        acc = add(acc, term);
      }
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

inline Scalar random_nonzero_scalar(Rng& rng, const Semiring& sr) {
  for (int i = 0; i < 64; ++i) {
    Scalar s = random_scalar(rng, sr);
    if (!is_zero(s)) return s;
  }
  return sr.one();
}

inline AlgPtr random_alg_term(Rng& rng, const Semiring& sr, int budget,
                              std::vector<std::string> scope = {}) {
  static const std::vector<std::string> pool = {"x", "y", "z"};
  static const std::vector<std::string> binders = {"x", "y", "z", "w"};
  auto leaf = [&]() -> AlgPtr {
    switch (rng.range(0, 3)) {
      case 0:
      case 1:
        if (!scope.empty() && rng.coin()) return mk_var(rng.pick(scope));
        return mk_var(rng.pick(pool));
      case 2:
        return mk_c0();
      default:
        return mk_zero();
    }
  };
  if (budget <= 2) return leaf();
  switch (rng.range(0, 6)) {
    case 0:
      return leaf();
    case 1: {
      const std::string v = rng.pick(binders);
      auto inner = scope;
      inner.push_back(v);
      return mk_abs(v, random_alg_term(rng, sr, budget - 2, inner));
    }
    case 2:
    case 3: {
      const int lb = rng.range(1, budget - 2);
      return mk_app(random_alg_term(rng, sr, lb, scope),
                    random_alg_term(rng, sr, budget - 1 - lb, scope));
    }
    case 4:
      return mk_scale(random_scalar(rng, sr), random_alg_term(rng, sr, budget - 1, scope));
    default: {
      const int lb = rng.range(1, budget - 2);
      return mk_sum(random_alg_term(rng, sr, lb, scope),
                    random_alg_term(rng, sr, budget - 1 - lb, scope));
    }
  }
}

inline ResPtr random_res_term(Rng& rng, int budget, std::vector<std::string> scope = {}) {
  static const std::vector<std::string> pool = {"x", "y", "z"};
  static const std::vector<std::string> binders = {"x", "y", "z", "w"};
  auto leaf = [&]() -> ResPtr {
    if (rng.range(0, 3) == 0) return mk_rc0();
    if (!scope.empty() && rng.coin()) return mk_rvar(rng.pick(scope));
    return mk_rvar(rng.pick(pool));
  };
  if (budget <= 2) return leaf();
  switch (rng.range(0, 4)) {
    case 0:
      return leaf();
    case 1:
    case 2: {
      const std::string v = rng.pick(binders);
      auto inner = scope;
      inner.push_back(v);
      return mk_rabs(v, random_res_term(rng, budget - 2, inner));
    }
    default: {
      const int fb = rng.range(1, budget - 1);
      ResPtr fun = random_res_term(rng, fb, scope);
      Bag bag;
      int rest = budget - 1 - fb;
      while (rest >= 1 && rng.range(0, 3) != 0) {
        const int ib = rng.range(1, rest);
        const int mult = rest >= 2 * ib && rng.coin() ? 2 : 1;
        bag.insert(random_res_term(rng, ib, scope), mult);
        rest -= mult * ib;
      }
      return mk_rapp(std::move(fun), std::move(bag));
    }
  }
}

/// Closed algebraic terms: variables only refer to enclosing binders.
inline AlgPtr random_closed_alg_term(Rng& rng, const Semiring& sr, int budget,
                                     std::vector<std::string> scope = {}) {
  static const std::vector<std::string> binders = {"x", "y", "z", "w"};
  auto leaf = [&]() -> AlgPtr {
    if (!scope.empty() && rng.range(0, 3) > 0) return mk_var(rng.pick(scope));
    switch (rng.range(0, 2)) {
      case 0:
        return mk_c0();
      case 1:
        return mk_zero();
      default:
        return mk_abs("u", mk_var("u"));
    }
  };
  if (budget <= 2) return leaf();
  switch (rng.range(0, 6)) {
    case 0:
      return leaf();
    case 1:
    case 2: {
      const std::string v = rng.pick(binders);
      auto inner = scope;
      inner.push_back(v);
      return mk_abs(v, random_closed_alg_term(rng, sr, budget - 2, inner));
    }
    case 3: {
      const int lb = rng.range(1, budget - 2);
      return mk_app(random_closed_alg_term(rng, sr, lb, scope),
                    random_closed_alg_term(rng, sr, budget - 1 - lb, scope));
    }
    case 4:
      return mk_scale(random_scalar(rng, sr), random_closed_alg_term(rng, sr, budget - 1, scope));
    default: {
      const int lb = rng.range(1, budget - 2);
      return mk_sum(random_closed_alg_term(rng, sr, lb, scope),
                    random_closed_alg_term(rng, sr, budget - 1 - lb, scope));
    }
  }
}

/// Closed algebraic terms biased toward abstractions meeting arguments.
inline AlgPtr random_redexy_alg_term(Rng& rng, const Semiring& sr, int budget,
                                     std::vector<std::string> scope = {}) {
  static const std::vector<std::string> binders = {"x", "y", "z"};
  if (budget >= 6 && rng.coin()) {
    const std::string v = rng.pick(binders);
    auto inner = scope;
    inner.push_back(v);
    return mk_app(mk_abs(v, random_redexy_alg_term(rng, sr, budget - 4, inner)),
                  random_redexy_alg_term(rng, sr, 3, scope));
  }
  return random_closed_alg_term(rng, sr, budget, scope);
}

/// Resource terms biased toward beta redexes whose bag width usually matches
/// the binder degree (occasionally off by one, so the redex reduces to zero).
inline ResPtr random_redexy_term(Rng& rng, int budget, std::vector<std::string> scope = {}) {
  static const std::vector<std::string> binders = {"x", "y", "z"};
  if (budget < 5 || rng.range(0, 2) > 0) return random_res_term(rng, budget, scope);
  const std::string v = rng.pick(binders);
  auto inner = scope;
  inner.push_back(v);
  ResPtr body = random_redexy_term(rng, budget - 4, inner);
  Nat want = degree(body, v);
  if (rng.range(0, 4) == 0) ++want;
  Bag bag;
  for (Nat i = 0; i < want; ++i) bag.insert(random_redexy_term(rng, 2, scope));
  return mk_rapp(mk_rabs(v, std::move(body)), std::move(bag));
}

}  // namespace alkam::testgen
