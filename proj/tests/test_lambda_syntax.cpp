#include "alkam/lambda_syntax.hpp"

#include <set>
#include <string>

#include "doctest.h"
#include "gen.hpp"
#include "rules.hpp"

using namespace alkam;
using testgen::Rng;

namespace {

const Semiring kRat = Semiring::rationals();
const Semiring kPoly = Semiring::polynomials({"p", "q"});

AlgPtr rat(const std::string& s) { return parse_alg(s, kRat); }

bool canon_same(const std::string& a, const std::string& b, const Semiring& sr) {
  return canonical_eq(canonicalize(parse_alg(a, sr), sr), canonicalize(parse_alg(b, sr), sr));
}

}  // namespace

TEST_SUITE("lambda_syntax") {

TEST_CASE("parsing builds the expected shapes") {
  const AlgPtr t = rat("((\\x.(x)x) \\x.x) c0");
  const auto& outer = std::get<AlgTerm::App>(t->node);
  CHECK(std::holds_alternative<AlgTerm::C0>(outer.arg->node));
  const auto& inner = std::get<AlgTerm::App>(outer.fun->node);
  CHECK(std::holds_alternative<AlgTerm::Abs>(inner.fun->node));
  CHECK(std::holds_alternative<AlgTerm::Abs>(inner.arg->node));

  CHECK(alpha_eq(rat("\\x.x"), parse_alg("λx.x", kRat)));
  CHECK(alpha_eq(rat("(x) y z"), rat("((x) y) z")));
  CHECK(alpha_eq(rat("x y"), rat("(x) y")));
}

TEST_CASE("a sum of scaled lambdas stays a sum, not a lambda body") {
  // The abstraction body stops before '+', so the scaled branches stay apart.
  const AlgPtr t = parse_alg("(\\x.(x)x) (p*\\x.x + q*\\x.\\y.y) c0", kPoly);
  const auto& outer = std::get<AlgTerm::App>(t->node);
  const auto& inner = std::get<AlgTerm::App>(outer.fun->node);
  const auto& sum = std::get<AlgTerm::Sum>(inner.arg->node);
  const auto& left = std::get<AlgTerm::Scale>(sum.lhs->node);
  const auto& right = std::get<AlgTerm::Scale>(sum.rhs->node);
  CHECK(eq(left.factor, kPoly.parse("p")));
  CHECK(eq(right.factor, kPoly.parse("q")));
  CHECK(alpha_eq(left.term, parse_alg("\\x.x", kPoly)));
  CHECK(alpha_eq(right.term, parse_alg("\\x.\\y.y", kPoly)));
}

TEST_CASE("scalar literals inside terms") {
  CHECK(alpha_eq(rat("2*x"), mk_scale(kRat.parse("2"), mk_var("x"))));
  CHECK(alpha_eq(rat("1/2*x"), mk_scale(kRat.parse("1/2"), mk_var("x"))));
  // A trailing declared indeterminate is a variable, not a coefficient.
  const AlgPtr pq = parse_alg("p*q", kPoly);
  const auto& sc = std::get<AlgTerm::Scale>(pq->node);
  CHECK(eq(sc.factor, kPoly.parse("p")));
  CHECK(std::holds_alternative<AlgTerm::Var>(sc.term->node));
  // A parenthesized scalar sum is one coefficient.
  const AlgPtr grouped = parse_alg("(p + q)*x", kPoly);
  CHECK(eq(std::get<AlgTerm::Scale>(grouped->node).factor, kPoly.parse("p + q")));
  // A bare variable that happens to be declared still parses as a variable.
  CHECK(std::holds_alternative<AlgTerm::Var>(parse_alg("p", kPoly)->node));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(rat("2"), ParseError);
  CHECK_THROWS_AS(rat("2*"), ParseError);
  CHECK_THROWS_AS(rat("(x"), ParseError);
  CHECK_THROWS_AS(rat("x)"), ParseError);
  CHECK_THROWS_AS(rat("\\c0.x"), ParseError);
  CHECK_THROWS_AS(rat("x + "), ParseError);
  CHECK_THROWS_AS(rat("(x + y)*z"), ParseError);
  CHECK_THROWS_AS(rat(""), ParseError);
  CHECK_THROWS_AS(parse_alg("r*x", kPoly), ParseError);  // undeclared stays a term head
  try {
    rat("x + *");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("free variables and substitution") {
  CHECK(free_vars(rat("\\x.(x)y + 2*z")) == std::set<std::string>{"y", "z"});
  CHECK(free_vars(rat("\\x.\\y.(x)y")).empty());

  // Substitution avoids capture by renaming the binder.
  const AlgPtr body = rat("\\y.(x)y");
  const AlgPtr replaced = subst(body, "x", mk_var("y"));
  CHECK(alpha_eq(replaced, rat("\\w.(y)w")));
  CHECK_FALSE(alpha_eq(replaced, rat("\\y.(y)y")));

  CHECK(alpha_eq(subst(rat("(x)x"), "x", rat("c0")), rat("(c0)c0")));
  CHECK(alpha_eq(subst(rat("\\x.x"), "x", rat("c0")), rat("\\x.x")));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(rat("\\x.x"), rat("\\y.y")));
  CHECK(alpha_eq(rat("\\x.\\y.(x)y"), rat("\\a.\\b.(a)b")));
  CHECK_FALSE(alpha_eq(rat("\\x.\\y.x"), rat("\\x.\\y.y")));
  CHECK_FALSE(alpha_eq(rat("x"), rat("y")));
  CHECK(alpha_eq(rat("2*\\x.x"), rat("2*\\z.z")));
}

TEST_CASE("canonical forms of specific terms") {
  CHECK(canon_same("2*x + 3*x", "5*x", kRat));
  CHECK(canonicalize(rat("\\x.0"), kRat).empty());
  CHECK(canonicalize(rat("0*x + \\y.0"), kRat).empty());
  CHECK(canonicalize(rat("(0) c0"), kRat).empty());
  CHECK(canon_same("x", "1*x + 0", kRat));
  CHECK(canon_same("\\x.x + \\y.y", "2*\\z.z", kRat));
  CHECK(canon_same("(p*\\x.x + q*\\x.\\y.y) z", "p*(\\x.x) z + q*(\\x.\\y.y) z", kPoly));
  CHECK(canon_same("(2*x) y", "2*(x) y", kRat));
  CHECK(canon_same("\\x.(x + 1/2*y)", "\\x.x + 1/2*\\x.y", kRat));
  CHECK_FALSE(canon_same("(x) (y + z)", "(x) y + (x) z", kRat));  // argument position is not linear
  CHECK(to_string(canonicalize(rat("2*x + 3*x"), kRat)) == "5*x");
  CHECK(to_string(canonicalize(rat("\\x.0"), kRat)) == "0");
}

TEST_CASE("the fifteen algebraic equalities hold under canonicalization") {
  Rng rng(20260816);
  const auto rules = testgen::algebraic_equalities();
  REQUIRE(rules.size() == 15);
  for (const Semiring& sr : {kRat, kPoly}) {
    for (const auto& rule : rules) {
      CAPTURE(rule.name);
      for (int i = 0; i < 100; ++i) {
        const AlgPtr m = testgen::random_alg_term(rng, sr, 6);
        const AlgPtr n = testgen::random_alg_term(rng, sr, 6);
        const AlgPtr p = testgen::random_alg_term(rng, sr, 6);
        const Scalar a = testgen::random_scalar(rng, sr);
        const Scalar b = testgen::random_scalar(rng, sr);
        const auto [lhs, rhs] = rule.make(m, n, p, a, b, sr);
        CHECK(canonical_eq(canonicalize(lhs, sr), canonicalize(rhs, sr)));
      }
    }
  }
}

TEST_CASE("canonicalization is idempotent through embedding") {
  Rng rng(99);
  for (const Semiring& sr : {kRat, kPoly}) {
    for (int i = 0; i < 300; ++i) {
      const AlgPtr t = testgen::random_alg_term(rng, sr, 10);
      const CanonicalTerm c = canonicalize(t, sr);
      CHECK(canonical_eq(canonicalize(embed(c), sr), c));
    }
  }
}

TEST_CASE("canonical equality is a congruence") {
  Rng rng(123);
  for (int i = 0; i < 200; ++i) {
    const AlgPtr t = testgen::random_alg_term(rng, kRat, 8);
    const AlgPtr u = embed(canonicalize(t, kRat));  // canonically equal respelling
    const AlgPtr other = testgen::random_alg_term(rng, kRat, 5);
    const Scalar a = testgen::random_scalar(rng, kRat);
    const std::vector<std::pair<AlgPtr, AlgPtr>> contexts = {
        {mk_abs("x", t), mk_abs("x", u)},
        {mk_app(t, other), mk_app(u, other)},
        {mk_app(other, t), mk_app(other, u)},
        {mk_scale(a, t), mk_scale(a, u)},
        {mk_sum(t, other), mk_sum(u, other)},
    };
    for (const auto& [ct, cu] : contexts)
      CHECK(canonical_eq(canonicalize(ct, kRat), canonicalize(cu, kRat)));
  }
}

TEST_CASE("printing round-trips to an alpha-equal term") {
  Rng rng(7);
  for (const Semiring& sr : {kRat, kPoly, Semiring::naturals(), Semiring::booleans()}) {
    CAPTURE(sr.name());
    for (int i = 0; i < 400; ++i) {
      const AlgPtr t = testgen::random_alg_term(rng, sr, 12);
      CAPTURE(to_string(t));
      CHECK(alpha_eq(parse_alg(to_string(t), sr), t));
    }
  }
}

TEST_CASE("canonical printing round-trips canonically") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const AlgPtr t = testgen::random_alg_term(rng, kPoly, 10);
    const CanonicalTerm c = canonicalize(t, kPoly);
    CHECK(canonical_eq(canonicalize(parse_alg(to_string(c), kPoly), kPoly), c));
  }
}

TEST_CASE("term sizes") {
  CHECK(term_size(rat("x")) == 1);
  CHECK(term_size(rat("\\x.x")) == 3);
  CHECK(term_size(rat("(x) y")) == 3);
  CHECK(term_size(rat("2*x + c0")) == 4);
}

}  // TEST_SUITE
