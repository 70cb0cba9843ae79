#pragma once

#include <map>
#include <optional>
#include <string>

#include "alkam/resource_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam {

/// Combination of simple terms with natural coefficients, the codomain of
/// reduction before any semiring enters the picture.
class NatCombination {
 public:
  using Map = std::map<ResPtr, Nat, ResAlphaLess>;

  NatCombination() = default;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void insert_add(const ResPtr& t, const Nat& n = 1);
  std::optional<Nat> coefficient_of(const ResPtr& t) const;

  friend bool operator==(const NatCombination&, const NatCombination&);

 private:
  Map entries_;
};

/// Linear substitution: replaces the free occurrences of `var` in `s` by the
/// items of `bag`, one item per occurrence, summing over all distinct
/// assignments weighted by the product of the bag's multiplicity factorials.
/// Zero (the empty combination) unless the degree matches the bag's width.
NatCombination linear_subst(const ResPtr& s, const std::string& var, const Bag& bag);

/// The same sum computed by brute force over all width! occurrence orders.
/// Cross-checks the grouped enumeration; exponential, keep bags small.
NatCombination linear_subst_naive(const ResPtr& s, const std::string& var, const Bag& bag);

enum class Strategy { LeftmostOutermost, RightmostInnermost };

bool is_normal(const ResPtr& s);
bool is_normal(const Bag& b);

/// Rewrites the redex the strategy selects; nullopt when `s` is normal.
/// An engaged empty combination means the redex reduced to zero.
std::optional<NatCombination> reduce_step(const ResPtr& s, Strategy strategy);

/// Full normalization by repeated reduction. Reduction is strongly
/// normalizing, so this terminates under every strategy, and confluent, so
/// the strategy does not affect the result.
NatCombination normal_form(const ResPtr& s, Strategy strategy = Strategy::LeftmostOutermost);

/// Normal form with the natural coefficients mapped into `sr`.
Combination normal_form(const ResPtr& s, const Semiring& sr);

/// Normal form of a bag: the convolution of the items' normal forms, one
/// factor per occurrence.
BagCombination normal_form(const Bag& b, const Semiring& sr);

}  // namespace alkam
