#pragma once

// The fifteen equalities the canonical form must validate: nine module laws
// over coefficients plus six linearity laws for abstraction and for the
// function position of application. Shared between the unit tests and the
// acceptance checks.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "alkam/lambda_syntax.hpp"

namespace alkam::testgen {

struct AlgebraicRule {
  std::string name;
  std::function<std::pair<AlgPtr, AlgPtr>(const AlgPtr& M, const AlgPtr& N, const AlgPtr& P,
                                          const Scalar& a, const Scalar& b, const Semiring& sr)>
      make;
};

inline std::vector<AlgebraicRule> algebraic_equalities() {
  using P2 = std::pair<AlgPtr, AlgPtr>;
  using S = const Scalar&;
  using T = const AlgPtr&;
  using R = const Semiring&;
  std::vector<AlgebraicRule> rules;
  auto rule = [&](std::string name, auto f) { rules.push_back({std::move(name), f}); };

  rule("M + 0 = M", [](T M, T, T, S, S, R) -> P2 { return {mk_sum(M, mk_zero()), M}; });
  rule("(M + N) + P = M + (N + P)", [](T M, T N, T P, S, S, R) -> P2 {
    return {mk_sum(mk_sum(M, N), P), mk_sum(M, mk_sum(N, P))};
  });
  rule("M + N = N + M",
       [](T M, T N, T, S, S, R) -> P2 { return {mk_sum(M, N), mk_sum(N, M)}; });
  rule("a(M + N) = aM + aN", [](T M, T N, T, S a, S, R) -> P2 {
    return {mk_scale(a, mk_sum(M, N)), mk_sum(mk_scale(a, M), mk_scale(a, N))};
  });
  rule("aM + bM = (a + b)M", [](T M, T, T, S a, S b, R) -> P2 {
    return {mk_sum(mk_scale(a, M), mk_scale(b, M)), mk_scale(add(a, b), M)};
  });
  rule("a(bM) = (ab)M", [](T M, T, T, S a, S b, R) -> P2 {
    return {mk_scale(a, mk_scale(b, M)), mk_scale(mul(a, b), M)};
  });
  rule("1M = M", [](T M, T, T, S, S, R sr) -> P2 { return {mk_scale(sr.one(), M), M}; });
  rule("0M = 0", [](T M, T, T, S, S, R sr) -> P2 { return {mk_scale(sr.zero(), M), mk_zero()}; });
  rule("a0 = 0", [](T, T, T, S a, S, R) -> P2 { return {mk_scale(a, mk_zero()), mk_zero()}; });
  rule("\\x.(M + N) = \\x.M + \\x.N", [](T M, T N, T, S, S, R) -> P2 {
    return {mk_abs("x", mk_sum(M, N)), mk_sum(mk_abs("x", M), mk_abs("x", N))};
  });
  rule("\\x.(aM) = a(\\x.M)", [](T M, T, T, S a, S, R) -> P2 {
    return {mk_abs("x", mk_scale(a, M)), mk_scale(a, mk_abs("x", M))};
  });
  rule("\\x.0 = 0", [](T, T, T, S, S, R) -> P2 { return {mk_abs("x", mk_zero()), mk_zero()}; });
  rule("(0)M = 0", [](T M, T, T, S, S, R) -> P2 { return {mk_app(mk_zero(), M), mk_zero()}; });
  rule("(aM)N = a((M)N)", [](T M, T N, T, S a, S, R) -> P2 {
    return {mk_app(mk_scale(a, M), N), mk_scale(a, mk_app(M, N))};
  });
  rule("(M + N)P = (M)P + (N)P", [](T M, T N, T P, S, S, R) -> P2 {
    return {mk_app(mk_sum(M, N), P), mk_sum(mk_app(M, P), mk_app(N, P))};
  });
  return rules;
}

}  // namespace alkam::testgen
