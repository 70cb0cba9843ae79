#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "alkam/qkam.hpp"
#include "alkam/resource_reduction.hpp"
#include "alkam/taylor.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace alkam;

namespace {

void check_same(const Combination& a, const Combination& b) {
  REQUIRE(a.size() == b.size());
  auto ib = b.entries().begin();
  for (const auto& [t, c] : a.entries()) {
    CHECK(alpha_eq(t, ib->first));
    CHECK(eq(c, ib->second));
    ++ib;
  }
}

using testgen::expand_oracle;

AlgPtr random_pure_term(testgen::Rng& rng, int budget, std::vector<std::string> scope) {
  static const std::vector<std::string> binders = {"x", "y", "z"};
  auto leaf = [&]() -> AlgPtr {
    if (!scope.empty() && rng.range(0, 2) > 0) return mk_var(rng.pick(scope));
    return rng.coin() ? mk_c0() : mk_abs("u", mk_var("u"));
  };
  if (budget <= 2) return leaf();
  switch (rng.range(0, 3)) {
    case 0:
      return leaf();
    case 1:
    case 2: {
      const std::string v = rng.pick(binders);
      auto inner = scope;
      inner.push_back(v);
      return mk_abs(v, random_pure_term(rng, budget - 2, inner));
    }
    default: {
      const int lb = rng.range(1, budget - 2);
      return mk_app(random_pure_term(rng, lb, scope),
                    random_pure_term(rng, budget - 1 - lb, scope));
    }
  }
}

}  // namespace

TEST_SUITE("taylor") {
  TEST_CASE("weights of leaves and mismatches") {
    const Semiring sr = Semiring::naturals();
    CHECK(is_one(weight(parse_res("x"), parse_alg("x", sr), sr)));
    CHECK(is_one(weight(parse_res("c0"), parse_alg("c0", sr), sr)));
    CHECK(is_zero(weight(parse_res("x"), parse_alg("y", sr), sr)));
    CHECK(is_zero(weight(parse_res("x"), parse_alg("\\y.y", sr), sr)));
    CHECK(is_zero(weight(parse_res("x"), parse_alg("c0", sr), sr)));
    CHECK(is_zero(weight(parse_res("c0"), parse_alg("0", sr), sr)));
    CHECK(is_zero(weight(parse_res("<x>{}"), parse_alg("x", sr), sr)));
  }

  TEST_CASE("weights align binders, not spellings") {
    const Semiring sr = Semiring::naturals();
    CHECK(is_one(weight(parse_res("\\x.x"), parse_alg("\\y.y", sr), sr)));
    CHECK(is_one(weight(parse_res("\\x.\\y.<x>{y}"), parse_alg("\\a.\\b.(a) b", sr), sr)));
    CHECK(is_zero(weight(parse_res("\\x.\\y.<x>{y}"), parse_alg("\\a.\\b.(b) a", sr), sr)));
    CHECK(is_zero(weight(parse_res("\\x.y"), parse_alg("\\y.y", sr), sr)));
    CHECK(is_one(weight(parse_res("\\x.y"), parse_alg("\\x.y", sr), sr)));
    // a free name on one side never matches a binder on the other
    CHECK(is_zero(weight(parse_res("\\x.x"), parse_alg("\\y.x", sr), sr)));
  }

  TEST_CASE("weights multiply per occurrence and add over sums") {
    const Semiring sr = Semiring::naturals();
    CHECK(eq(weight(parse_res("<x>{x^3}"), parse_alg("(x) (2*x + y) + (x) (x + z)", sr), sr),
             sr.nat_embed(9)));
    CHECK(eq(weight(parse_res("c0"), parse_alg("2*c0 + c0", sr), sr), sr.nat_embed(3)));
    CHECK(is_one(weight(parse_res("<\\z.z>{c0^2}"), parse_alg("(\\z.z) c0", sr), sr)));
    // the empty bag ignores the argument entirely
    CHECK(is_one(weight(parse_res("<\\z.z>{}"), parse_alg("(\\z.z) ((c0) c0)", sr), sr)));

    const Semiring poly = Semiring::polynomials({"p", "q"});
    CHECK(eq(weight(parse_res("\\x.x"), parse_alg("p*\\x.x + q*\\x.\\y.y", poly), poly),
             poly.parse("p")));
    CHECK(eq(weight(parse_res("<x>{x}"), parse_alg("(x) (p*x + q*c0)", poly), poly),
             poly.parse("p")));
    CHECK(eq(weight(parse_res("<x>{x,c0}"), parse_alg("(x) (p*x + q*c0)", poly), poly),
             poly.parse("p*q")));
  }

  TEST_CASE("weights are invariant across canonicalization") {
    for (const Semiring& sr :
         {Semiring::rationals(), Semiring::polynomials({"p", "q"})}) {
      testgen::Rng rng(660);
      for (int iter = 0; iter < 150; ++iter) {
        const AlgPtr m =
            testgen::random_alg_term(rng, sr, rng.range(2, 9), {"x", "y"});
        const ResPtr t = testgen::random_res_term(rng, rng.range(1, 7), {"x", "y"});
        CHECK(eq(weight(t, m, sr), weight(t, embed(canonicalize(m, sr)), sr)));
      }
    }
  }

  TEST_CASE("weights of scale-free sum-free terms are zero or one") {
    const Semiring sr = Semiring::rationals();
    testgen::Rng rng(7177);
    int ones = 0;
    for (int iter = 0; iter < 80; ++iter) {
      const AlgPtr m = random_pure_term(rng, rng.range(2, 9), {});
      const ResPtr probe = testgen::random_res_term(rng, rng.range(1, 7));
      const Scalar w = weight(probe, m, sr);
      CHECK((is_zero(w) || is_one(w)));
      const Combination support = taylor_support(m, 8, sr);
      for (const auto& [t, c] : support.entries()) {
        CHECK(is_one(weight(t, m, sr)));
        ++ones;
      }
    }
    CHECK(ones > 100);
  }

  TEST_CASE("expansion coefficients divide the weight by the multiplicity") {
    const Semiring rat = Semiring::rationals();
    const AlgPtr program = parse_alg("((\\x.(x) x) \\x.x) c0", rat);
    const ResPtr t = parse_res("<<\\x.<x>{x}>{(\\x.x)^2}>{c0}");
    CHECK(eq(taylor_coeff(program, t, rat), rat.parse("1/2")));
    CHECK(is_one(taylor_coeff(parse_alg("c0", rat), parse_res("c0"), rat)));

    // the naturals cannot halve an odd weight
    const Semiring nat = Semiring::naturals();
    CHECK_THROWS_AS(
        taylor_coeff(parse_alg("((\\x.(x) x) \\x.x) c0", nat), t, nat), NotDivisible);

    const Semiring poly = Semiring::polynomials({"p", "q"});
    CHECK(eq(taylor_coeff(parse_alg("((\\x.(x) x) (p*\\x.x + q*\\x.\\y.y)) c0", poly), t,
             poly),
             poly.parse("1/2*p^2")));

    testgen::Rng rng(31415);
    for (int iter = 0; iter < 200; ++iter) {
      const AlgPtr m = testgen::random_alg_term(rng, rat, rng.range(2, 8), {"x", "y"});
      const ResPtr probe = testgen::random_res_term(rng, rng.range(1, 7), {"x", "y"});
      const Scalar lhs = mul(rat.nat_embed(multiplicity(probe)), taylor_coeff(m, probe, rat));
      CHECK(eq(lhs, weight(probe, m, rat)));
    }
  }

  TEST_CASE("bounded supports hold exactly the nonzero coefficients") {
    const Semiring sr = Semiring::rationals();
    const Combination plain = taylor_support(parse_alg("\\x.x", sr), 10, sr);
    REQUIRE(plain.size() == 1);
    CHECK(alpha_eq(plain.entries().begin()->first, parse_res("\\x.x")));
    CHECK(is_one(plain.entries().begin()->second));

    const Combination redex = taylor_support(parse_alg("(\\z.z) c0", sr), 6, sr);
    REQUIRE(redex.size() == 3);
    REQUIRE(redex.coefficient_of(parse_res("<\\z.z>{}")).has_value());
    REQUIRE(redex.coefficient_of(parse_res("<\\z.z>{c0}")).has_value());
    REQUIRE(redex.coefficient_of(parse_res("<\\z.z>{c0^2}")).has_value());
    CHECK(is_one(*redex.coefficient_of(parse_res("<\\z.z>{}"))));
    CHECK(is_one(*redex.coefficient_of(parse_res("<\\z.z>{c0}"))));
    CHECK(eq(*redex.coefficient_of(parse_res("<\\z.z>{c0^2}")), sr.parse("1/2")));

    CHECK(taylor_support(parse_alg("(\\z.z) c0", sr), 5, sr).size() == 2);
    CHECK(taylor_support(parse_alg("(\\z.z) c0", sr), 3, sr).empty());
    CHECK(taylor_support(parse_alg("0", sr), 20, sr).empty());
    CHECK(taylor_support(parse_alg("c0 + 0", sr), 20, sr).size() == 1);

    const AlgPtr twice = parse_alg("(\\x.(x) x) \\y.y", sr);
    const Combination wide = taylor_support(twice, 12, sr);
    CHECK_FALSE(wide.empty());
    for (const auto& [t, c] : wide.entries()) {
      CHECK(term_size(t) <= 12);
      CHECK_FALSE(is_zero(c));
      CHECK(eq(c, taylor_coeff(twice, t, sr)));
    }
  }

  TEST_CASE("width expansion and weight scoring agree") {
    const Semiring rat = Semiring::rationals();
    const Semiring poly = Semiring::polynomials({"p", "q"});
    for (const char* text : {"(\\z.z) c0", "((\\x.(x) x) \\x.x) c0", "\\x.x",
                             "(\\x.(x) x) (\\y.y + 2*c0)", "(c0) (c0 + 3*\\u.u)"}) {
      const AlgPtr m = parse_alg(text, rat);
      check_same(taylor_support(m, 10, rat), expand_oracle(m, 10, rat));
    }
    const AlgPtr weighted =
        parse_alg("((\\x.(x) x) (p*\\x.x + q*\\x.\\y.y)) c0", poly);
    check_same(taylor_support(weighted, 10, poly), expand_oracle(weighted, 10, poly));

    testgen::Rng rng(90210);
    for (int iter = 0; iter < 60; ++iter) {
      const AlgPtr m = testgen::random_alg_term(rng, rat, rng.range(2, 8), {"x"});
      check_same(taylor_support(m, 9, rat), expand_oracle(m, 9, rat));
    }
  }

  TEST_CASE("machine and expansion sides of the worked examples") {
    const Semiring rat = Semiring::rationals();
    const CoefficientReport doubled = verify_theorem(
        parse_alg("((\\x.(x) x) \\x.x) c0", rat),
        parse_res("<<\\x.<x>{x}>{(\\x.x)^2}>{c0}"), rat);
    CHECK(is_one(doubled.lhs));
    CHECK(eq(doubled.taylor, rat.parse("1/2")));
    CHECK(eq(doubled.nf_c0, rat.parse("2")));
    CHECK(is_one(doubled.rhs));
    CHECK(doubled.equal);

    const Semiring poly = Semiring::polynomials({"p", "q"});
    const CoefficientReport discard = verify_theorem(
        parse_alg("((\\x.(x) x) (p*\\x.x + q*\\x.\\y.y)) c0", poly),
        parse_res("<<\\x.<x>{}>{\\x.\\y.y}>{c0}"), poly);
    CHECK(eq(discard.lhs, poly.parse("q")));
    CHECK(eq(discard.taylor, poly.parse("q")));
    CHECK(is_one(discard.nf_c0));
    CHECK(eq(discard.rhs, poly.parse("q")));
    CHECK(discard.equal);

    const CoefficientReport mismatch = verify_theorem(
        parse_alg("((\\x.(x) x) \\x.x) c0", rat), parse_res("<\\y.y>{c0}"), rat);
    CHECK(is_zero(mismatch.lhs));
    CHECK(is_zero(mismatch.rhs));
    CHECK(mismatch.equal);

    CHECK_THROWS_AS(verify_theorem(mk_var("x"), parse_res("x"), rat), NotClosed);
  }

  TEST_CASE("generated corpora are deterministic, closed, and constant-applied") {
    const Semiring sr = Semiring::rationals();
    const auto a = generate_corpus(sr, 7, 20, 9);
    const auto b = generate_corpus(sr, 7, 20, 9);
    REQUIRE(a.size() == 20);
    REQUIRE(b.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(alpha_eq(a[i], b[i]));
    CHECK(generate_corpus(sr, 7, 0, 9).empty());
    bool all_same = true;
    const auto shifted = generate_corpus(sr, 8, 20, 9);
    for (std::size_t i = 0; i < a.size(); ++i)
      all_same = all_same && alpha_eq(a[i], shifted[i]);
    CHECK_FALSE(all_same);
    for (const auto& m : a) {
      CHECK(free_vars(m).empty());
      CHECK(term_size(m) <= 11);
      const auto* ap = std::get_if<AlgTerm::App>(&m->node);
      REQUIRE(ap != nullptr);
      CHECK(std::holds_alternative<AlgTerm::C0>(ap->arg->node));
    }
  }

  TEST_CASE("machine coefficients factor through expansion and normal forms") {
    int nontrivial = 0;
    for (const Semiring& sr :
         {Semiring::rationals(), Semiring::polynomials({"p", "q"})}) {
      testgen::Rng rng(1866);
      std::vector<AlgPtr> corpus = generate_corpus(sr, 20260816, 40, 9);
      corpus.push_back(parse_alg("((\\x.(x) x) \\x.x) c0", sr));
      if (!sr.indeterminates().empty())
        corpus.push_back(parse_alg("((\\x.(x) x) (p*\\x.x + q*\\x.\\y.y)) c0", sr));
      for (const AlgPtr& m : corpus) {
        Combination probes = taylor_support(m, 11, sr);
        const Combination consumed = enumerate_support(m, 11, sr);
        for (const auto& [t, c] : consumed.entries()) probes.insert_add(t, c);
        for (int extra = 0; extra < 3; ++extra)
          probes.insert_add(testgen::random_res_term(rng, rng.range(1, 9)), sr.one());
        for (const auto& [t, unused] : probes.entries()) {
          const CoefficientReport report = verify_theorem(m, t, sr);
          CHECK(report.equal);
          if (!is_zero(report.lhs)) ++nontrivial;
        }
      }
    }
    CHECK(nontrivial > 30);
  }
}
