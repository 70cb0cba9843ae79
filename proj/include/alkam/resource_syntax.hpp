#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "alkam/lambda_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam {

struct ResTerm;
using ResPtr = std::shared_ptr<const ResTerm>;

struct ResAlphaLess {
  bool operator()(const ResPtr&, const ResPtr&) const;
};

/// Finite multiset of simple terms in multiplicative notation; the empty bag
/// is the unit 1. Items are kept sorted in alpha order with their
/// multiplicities merged.
class Bag {
 public:
  using Item = std::pair<ResPtr, Nat>;

  Bag() = default;

  const std::vector<Item>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t distinct() const { return items_.size(); }
  Nat width() const;  // sum of multiplicities

  void insert(const ResPtr& t, const Nat& count = 1);

 private:
  std::vector<Item> items_;
};

/// Simple resource term: variable, constant, abstraction, or application of
/// a term to a bag of terms.
struct ResTerm {
  struct Var {
    std::string name;
  };
  struct C0 {};
  struct Abs {
    std::string var;
    ResPtr body;
  };
  struct App {
    ResPtr fun;
    Bag arg;
  };

  std::variant<Var, C0, Abs, App> node;
};

ResPtr mk_rvar(std::string name);
ResPtr mk_rc0();
ResPtr mk_rabs(std::string var, ResPtr body);
ResPtr mk_rapp(ResPtr fun, Bag arg);

int alpha_cmp(const ResPtr&, const ResPtr&);
int alpha_cmp(const Bag&, const Bag&);
bool alpha_eq(const ResPtr&, const ResPtr&);
bool alpha_eq(const Bag&, const Bag&);

struct BagAlphaLess {
  bool operator()(const Bag&, const Bag&) const;
};

std::set<std::string> free_vars(const ResPtr&);
std::set<std::string> free_vars(const Bag&);
void collect_names(const ResPtr&, std::set<std::string>& out);
void collect_names(const Bag&, std::set<std::string>& out);

/// Syntax-node count with a binder counting two, and bag items weighted by
/// multiplicity; the convention matches term_size on algebraic terms.
std::size_t term_size(const ResPtr&);
std::size_t bag_size(const Bag&);

/// Number of free occurrences of `var`, counting multiplicities in bags.
Nat degree(const ResPtr&, const std::string& var);
Nat degree(const Bag&, const std::string& var);

/// Multiplicity coefficient: 1 on leaves, transparent to binders, and on an
/// application the function's multiplicity times, per distinct bag item, the
/// factorial of its count times its own multiplicity to that power.
Nat multiplicity(const ResPtr&);
Nat multiplicity(const Bag&);

Bag bag_union(const Bag&, const Bag&);

/// All ordered pairs (A, B) with A uplus B = T; there are prod(m_i + 1) of
/// them, one per ordered decomposition.
std::vector<std::pair<Bag, Bag>> bag_splittings(const Bag&);

/// Finite formal sum of simple terms with scalar coefficients, keyed up to
/// alpha-equivalence; no zero entries.
class Combination {
 public:
  using Map = std::map<ResPtr, Scalar, ResAlphaLess>;

  Combination() = default;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void insert_add(const ResPtr&, const Scalar&);
  std::optional<Scalar> coefficient_of(const ResPtr&) const;

 private:
  Map entries_;
};

/// The poly-term variant: a formal sum of bags.
class BagCombination {
 public:
  using Map = std::map<Bag, Scalar, BagAlphaLess>;

  BagCombination() = default;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void insert_add(const Bag&, const Scalar&);
  std::optional<Scalar> coefficient_of(const Bag&) const;

 private:
  Map entries_;
};

// ---------------------------- parse / print ----------------------------

/// Parses the resource grammar
///   t    ::= '\' id '.' t | '<' t '>' BAG | id | 'c0' | '(' t ')'
///   BAG  ::= '{' [ITEM (',' ITEM)*] '}'
///   ITEM ::= t ['^' nat]
/// `{}` is the unit bag. Throws ParseError.
ResPtr parse_res(const std::string& text);

std::string to_string(const ResPtr&);
std::string to_string(const Bag&);
std::string to_string(const Combination&);

}  // namespace alkam
