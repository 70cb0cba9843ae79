#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace alkam {

using Nat = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

Nat factorial(const Nat& n);

struct SemiringMismatch : std::runtime_error {
  explicit SemiringMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NotDivisible : std::runtime_error {
  explicit NotDivisible(const std::string& what) : std::runtime_error(what) {}
};

struct ScalarParseError : std::runtime_error {
  std::string bare;
  std::size_t position;
  ScalarParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"),
        bare(what),
        position(pos) {}
};

// ----------------------------- polynomials -----------------------------

/// Product of indeterminates with positive exponents; empty map = 1.
struct Monomial {
  std::map<std::string, unsigned> powers;

  bool operator==(const Monomial&) const = default;
  auto operator<=>(const Monomial&) const = default;
  unsigned degree() const;
};

/// Multivariate polynomial with non-negative rational coefficients,
/// kept as a sorted monomial -> coefficient map with no zero entries.
struct Polynomial {
  std::map<Monomial, Rat> terms;

  bool operator==(const Polynomial&) const = default;
  bool is_zero() const { return terms.empty(); }

  static Polynomial constant(const Rat& c);
  static Polynomial indeterminate(const std::string& name, unsigned power = 1);

  Rat eval(const std::map<std::string, Rat>& assignment) const;
};

Polynomial add(const Polynomial&, const Polynomial&);
Polynomial mul(const Polynomial&, const Polynomial&);

// ------------------------------- scalars -------------------------------

enum class SemiringKind { Booleans = 0, Naturals, Rationals, Polynomials };

std::string kind_name(SemiringKind);

/// One coefficient value; the variant alternative encodes which semiring
/// it belongs to, and mixing alternatives in an operation is an error.
class Scalar {
 public:
  explicit Scalar(bool b) : v_(b) {}
  explicit Scalar(Nat n) : v_(std::move(n)) {}
  explicit Scalar(Rat q) : v_(std::move(q)) {}
  explicit Scalar(Polynomial p) : v_(std::move(p)) {}

  SemiringKind kind() const { return static_cast<SemiringKind>(v_.index()); }

  bool as_bool() const;
  const Nat& as_nat() const;
  const Rat& as_rat() const;
  const Polynomial& as_poly() const;

 private:
  std::variant<bool, Nat, Rat, Polynomial> v_;
};

Scalar add(const Scalar&, const Scalar&);
Scalar mul(const Scalar&, const Scalar&);
bool eq(const Scalar&, const Scalar&);
bool is_zero(const Scalar&);
bool is_one(const Scalar&);
Scalar pow(const Scalar& base, const Nat& exponent);

/// Total order for deterministic containers: by kind, then by value.
/// Unlike eq, never throws on mixed kinds.
int scalar_cmp(const Scalar&, const Scalar&);

/// Exact division by an embedded natural n >= 1. Throws NotDivisible when no
/// exact quotient exists (naturals); the identity over booleans, where the
/// embedding of every n >= 1 is `true`.
Scalar div_by_nat(const Scalar&, const Nat& n);

std::string to_string(const Scalar&);

// ------------------------------ semirings ------------------------------

/// A chosen coefficient semiring: a kind plus, for polynomials, the declared
/// indeterminates. Values of other kinds (or foreign indeterminates) are
/// rejected by the constructors and the parser.
class Semiring {
 public:
  static Semiring booleans();
  static Semiring naturals();
  static Semiring rationals();
  static Semiring polynomials(std::vector<std::string> indeterminates);

  SemiringKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& indeterminates() const { return vars_; }
  bool has_indeterminate(const std::string& v) const;

  Scalar zero() const;
  Scalar one() const;
  Scalar nat_embed(const Nat& n) const;

  Scalar from_bool_literal(bool b) const;
  Scalar from_nat_literal(const Nat& n) const { return nat_embed(n); }
  Scalar from_ratio(const Nat& numerator, const Nat& denominator, std::size_t pos) const;
  Scalar var_power(const std::string& name, unsigned power, std::size_t pos) const;

  /// Parses a whole scalar literal: sums of products of atoms, where an atom
  /// is a natural, a ratio a/b, `true`/`false`, or a declared indeterminate
  /// with an optional ^k power. Throws ScalarParseError.
  Scalar parse(const std::string& text) const;

 private:
  Semiring(SemiringKind k, std::string name, std::vector<std::string> vars)
      : kind_(k), name_(std::move(name)), vars_(std::move(vars)) {}

  SemiringKind kind_;
  std::string name_;
  std::vector<std::string> vars_;
};

}  // namespace alkam
