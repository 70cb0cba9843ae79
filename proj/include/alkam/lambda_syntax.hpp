#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "alkam/scalar.hpp"

namespace alkam {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct NotClosed : std::runtime_error {
  explicit NotClosed(const std::string& what) : std::runtime_error(what) {}
};

// ----------------------------- raw terms -----------------------------

struct AlgTerm;
using AlgPtr = std::shared_ptr<const AlgTerm>;

/// A term of the algebraic calculus, exactly as written: variables, the
/// constant c0, abstractions, applications (linear in function position),
/// scalar multiples, binary sums, and the empty sum 0.
struct AlgTerm {
  struct Var {
    std::string name;
  };
  struct C0 {};
  struct Zero {};
  struct Abs {
    std::string var;
    AlgPtr body;
  };
  struct App {
    AlgPtr fun;
    AlgPtr arg;
  };
  struct Scale {
    Scalar factor;
    AlgPtr term;
  };
  struct Sum {
    AlgPtr lhs;
    AlgPtr rhs;
  };

  std::variant<Var, C0, Zero, Abs, App, Scale, Sum> node;
};

AlgPtr mk_var(std::string name);
AlgPtr mk_c0();
AlgPtr mk_zero();
AlgPtr mk_abs(std::string var, AlgPtr body);
AlgPtr mk_app(AlgPtr fun, AlgPtr arg);
AlgPtr mk_scale(Scalar factor, AlgPtr term);
AlgPtr mk_sum(AlgPtr lhs, AlgPtr rhs);

std::set<std::string> free_vars(const AlgPtr&);

/// Every name occurring anywhere in the term, free, bound, or binding.
void collect_names(const AlgPtr&, std::set<std::string>& out);

bool alpha_eq(const AlgPtr&, const AlgPtr&);

/// Syntax-node count, with a binder counting two (the lambda and its
/// variable). The same convention is used for resource terms.
std::size_t term_size(const AlgPtr&);

/// Capture-avoiding substitution of `replacement` for free `var`.
AlgPtr subst(const AlgPtr& term, const std::string& var, const AlgPtr& replacement);

/// Smallest name of the form base_1, base_2, ... not present in `avoid`.
/// Deterministic, so equal inputs always rename the same way.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// --------------------------- canonical forms ---------------------------

struct BaseTerm;
using BasePtr = std::shared_ptr<const BaseTerm>;
class CanonicalTerm;

struct BaseAlphaLess {
  bool operator()(const BasePtr&, const BasePtr&) const;
};

/// A finite formal sum of base terms with nonzero coefficients, keyed up to
/// alpha-equivalence. The empty map is the canonical zero.
class CanonicalTerm {
 public:
  using Map = std::map<BasePtr, Scalar, BaseAlphaLess>;

  CanonicalTerm() = default;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void insert_add(const BasePtr& base, const Scalar& coefficient);
  std::optional<Scalar> coefficient_of(const BasePtr&) const;

 private:
  Map entries_;
};

/// Scalar- and sum-free term: the summands canonical forms are made of.
/// Argument positions hold whole canonical forms, since application is
/// linear in function position only.
struct BaseTerm {
  struct Var {
    std::string name;
  };
  struct C0 {};
  struct Abs {
    std::string var;
    BasePtr body;
  };
  struct App {
    BasePtr fun;
    CanonicalTerm arg;
  };

  std::variant<Var, C0, Abs, App> node;
};

BasePtr mk_bvar(std::string name);
BasePtr mk_bc0();
BasePtr mk_babs(std::string var, BasePtr body);
BasePtr mk_bapp(BasePtr fun, CanonicalTerm arg);

int alpha_cmp(const BasePtr&, const BasePtr&);
int alpha_cmp(const CanonicalTerm&, const CanonicalTerm&);
bool alpha_eq(const BasePtr&, const BasePtr&);

/// True when both sides have alpha-equal summands with equal coefficients.
bool canonical_eq(const CanonicalTerm&, const CanonicalTerm&);

/// Rewrites a raw term into its canonical form: sums flattened and merged up
/// to alpha-equivalence, scalars pushed onto summand coefficients, zero
/// summands dropped, and abstraction/function-position linearity applied.
/// The semiring supplies the coefficient arithmetic and the unit coefficient.
CanonicalTerm canonicalize(const AlgPtr&, const Semiring&);

/// A raw term spelling of a canonical form (sum of scaled summands).
AlgPtr embed(const CanonicalTerm&);

// ---------------------------- parse / print ----------------------------

/// Parses the term grammar
///   M        ::= S ('+' S)*
///   S        ::= lit '*' S | A
///   A        ::= '\' id '.' S | APPCHAIN
///   APPCHAIN ::= HEAD ARG*
///   HEAD     ::= id | 'c0' | '0' | '(' M ')'
///   ARG      ::= id | 'c0' | '0' | '(' M ')' | '\' id '.' S
/// where lit is a nonempty '*'-chain of scalar atoms (naturals, ratios,
/// booleans, declared indeterminates with optional ^k, or a parenthesized
/// scalar sum). A lone trailing declared indeterminate is read back as a
/// variable, so `p*q` is p times the variable q. `\` may be spelled as a
/// lambda. Throws ParseError.
AlgPtr parse_alg(const std::string& text, const Semiring&);

std::string to_string(const AlgPtr&);
std::string to_string(const CanonicalTerm&);

}  // namespace alkam
