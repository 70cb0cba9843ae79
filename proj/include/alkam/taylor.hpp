#pragma once

#include <cstdint>
#include <vector>

#include "alkam/lambda_syntax.hpp"
#include "alkam/resource_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam {

/// How many ways `t` reads as an occurrence-labelled version of M: one on
/// matching leaves, transparent through matched binders, multiplicative over
/// an application (the function once, each bag occurrence against the
/// argument), scaling and sums taken linearly, and zero on any structural
/// mismatch.
Scalar weight(const ResPtr& t, const AlgPtr& M, const Semiring&);

/// weight(t, M) / multiplicity(t); the expansion coefficient of t in M.
/// Throws NotDivisible when the scalars cannot divide by the multiplicity.
Scalar taylor_coeff(const AlgPtr& M, const ResPtr& t, const Semiring&);

/// Every term of size <= max_size with a nonzero expansion coefficient,
/// mapped to that coefficient. Candidates come from expanding each
/// application into all bag widths the remaining size budget allows.
Combination taylor_support(const AlgPtr& M, std::size_t max_size, const Semiring&);

/// One differential check: the machine coefficient of an annotation against
/// its expansion coefficient times the constant's share of its normal form.
struct CoefficientReport {
  AlgPtr term;
  ResPtr annotation;
  Scalar lhs;     // machine coefficient
  Scalar taylor;  // weight / multiplicity
  Scalar nf_c0;   // constant's coefficient in the annotation's normal form
  Scalar rhs;     // taylor * nf_c0
  bool equal;
};

/// pre: M closed. Throws NotClosed and NotDivisible.
CoefficientReport verify_theorem(const AlgPtr& M, const ResPtr& t, const Semiring&);

/// Deterministic pseudo-random closed programs, each one applied to the
/// constant and biased toward head redexes, for differential testing.
std::vector<AlgPtr> generate_corpus(const Semiring&, std::uint64_t seed,
                                    std::size_t count, int size_bound);

}  // namespace alkam
