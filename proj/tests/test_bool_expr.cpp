#include <gtest/gtest.h>

#include "support.hpp"

using namespace genlab;
using namespace genlab::test;

namespace {

BoolExpr e(std::size_t i) { return BoolExpr::prim(i); }
BoolExpr neg(BoolExpr x) { return BoolExpr::compl_(std::move(x)); }

// Pointwise oracle: atom a lies in ⟦E⟧ iff E is true under the truth
// assignment i ↦ (a ∈ pi[i]).
bool truth_at(const BoolExpr& E, const std::vector<ElementSet>& pi, std::size_t a) {
  switch (E.kind()) {
    case BoolExpr::Kind::Prim: return pi.at(E.index()).contains(a);
    case BoolExpr::Kind::Compl: return !truth_at(E.children()[0], pi, a);
    case BoolExpr::Kind::Join:
      for (const auto& c : E.children())
        if (truth_at(c, pi, a)) return true;
      return false;
    case BoolExpr::Kind::Meet:
      for (const auto& c : E.children())
        if (!truth_at(c, pi, a)) return false;
      return true;
  }
  return false;
}

TEST(Rank, Examples) {
  EXPECT_EQ(e(0).rank(), 0U);
  EXPECT_EQ(neg(e(0)).rank(), 1U);
  EXPECT_EQ(BoolExpr::meet({e(0), neg(e(1))}).rank(), 2U);
  EXPECT_EQ(BoolExpr::join({}).rank(), 0U);  // empty sup
}

TEST(Subexpressions, Examples) {
  EXPECT_EQ(subexpressions(e(0)).size(), 1U);
  EXPECT_EQ(subexpressions(neg(e(0))).size(), 2U);
  EXPECT_EQ(subexpressions(BoolExpr::join({e(0), e(1)})).size(), 3U);
}

TEST(Borel, FiniteCorpusIsBorel) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto E = random_expr(rng, 3, 4, 3);
    EXPECT_TRUE(is_borel(E));
  }
  EXPECT_TRUE(is_borel(BoolExpr::join({})));
  FiniteBooleanAlgebra A(2);
  EXPECT_EQ(evaluate(BoolExpr::join({}), A, {}), A.zero());
  EXPECT_EQ(evaluate(BoolExpr::meet({}), A, {}), A.one());
}

TEST(Evaluate, Examples) {
  FiniteBooleanAlgebra A(3);
  EXPECT_EQ(evaluate(BoolExpr::join({e(0), neg(e(0))}), A, {A.element(0b010)}), A.one());
  EXPECT_EQ(evaluate(BoolExpr::meet({e(0), e(1)}), A, {A.element(0b011), A.element(0b110)}), A.element(0b010));
  EXPECT_THROW(evaluate(e(2), A, {A.one()}), InputError);
  Interpretation<FiniteBooleanAlgebra> I{&A, {A.element(0b001)}};
  EXPECT_EQ(evaluate(neg(e(0)), I), A.element(0b110));
}

TEST(Evaluate, MatchesPointwiseOracleAndDeMorgan) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 1 + rng() % 4;
    FiniteBooleanAlgebra A(k);
    std::vector<ElementSet> pi;
    for (int i = 0; i < 3; ++i) pi.push_back(A.element(rng() & ((1U << k) - 1)));
    const auto E = random_expr(rng, 3, 4, 3);
    const auto v = evaluate(E, A, pi);
    for (std::size_t a = 0; a < k; ++a) ASSERT_EQ(v.contains(a), truth_at(E, pi, a));
    if (E.kind() == BoolExpr::Kind::Join) {
      std::vector<BoolExpr> negs;
      for (const auto& c : E.children()) negs.push_back(neg(c));
      ASSERT_EQ(evaluate(neg(E), A, pi), evaluate(BoolExpr::meet(negs), A, pi));
    }
    for (const auto& c : E.children()) ASSERT_LT(c.rank(), E.rank());
  }
}

TEST(Parse, Examples) {
  EXPECT_EQ(parse_expr("e0"), e(0));
  EXPECT_EQ(parse_expr("!(e0)"), neg(e(0)));
  EXPECT_EQ(parse_expr("V[e0, A[e1, !(e2)]]"), BoolExpr::join({e(0), BoolExpr::meet({e(1), neg(e(2))})}));
  EXPECT_EQ(parse_expr("  V[ ]"), BoolExpr::join({}));
  EXPECT_EQ(print(parse_expr("V[e1,e0,e1]")), "V[e0, e1]");
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  for (const char* bad : {"", "e", "V[e0", "!(e0", "X[e0]", "e0 e1", "V[e0,]", "A[e0;e1]"}) {
    try {
      parse_expr(bad);
      FAIL() << "accepted '" << bad << "'";
    } catch (const InputError& err) {
      EXPECT_NE(std::string(err.what()).find("position"), std::string::npos) << bad;
    }
  }
}

TEST(Parse, RoundTripCorpus) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 10000; ++i) {
    const auto E = random_expr(rng, 5, 4, 3);
    const auto text = print(E);
    ASSERT_EQ(parse_expr(text), E) << text;
    ASSERT_EQ(print(parse_expr(text)), text);
  }
}

TEST(Prefilters, CountsAndDefinition) {
  // oracle: every nonempty subset of nonzero propositions checked directly
  for (std::size_t k = 1; k <= 3; ++k) {
    FiniteBooleanAlgebra A(k);
    const std::size_t U = proposition_universe(A);
    std::size_t brute = 0;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << U); ++m) {
      const auto D = ElementSet::from_mask(U, m);
      if (is_propositional_prefilter(A, D)) ++brute;
    }
    EXPECT_EQ(propositional_prefilters(A).size(), brute);
  }
  const auto four = propositional_prefilters(FiniteBooleanAlgebra(4));
  EXPECT_EQ(four.size(), 569U);
  for (const auto& D : four) ASSERT_TRUE(is_propositional_prefilter(FiniteBooleanAlgebra(4), D));
}

TEST(RequirementSets, Examples) {
  FiniteBooleanAlgebra A(2);
  const std::vector<ElementSet> pi{A.atom(0), A.atom(1)};
  const std::size_t U = proposition_universe(A);
  const auto P0 = A.atom(0).mask(), P1 = A.atom(1).mask();
  auto has = [&](const std::vector<ElementSet>& fam, std::vector<std::size_t> members) {
    ElementSet X(U);
    for (auto m : members) X.insert(m);
    return std::find(fam.begin(), fam.end(), X) != fam.end();
  };
  const auto f0 = genericity_requirement_sets(e(0), A, pi);
  EXPECT_EQ(f0.size(), 1U);
  EXPECT_TRUE(has(f0, {P0}));
  const auto f1 = genericity_requirement_sets(neg(e(0)), A, pi);
  EXPECT_TRUE(has(f1, {P0}));
  EXPECT_TRUE(has(f1, {A.complement(A.atom(0)).mask()}));
  const auto f2 = genericity_requirement_sets(BoolExpr::join({e(0), e(1)}), A, pi);
  EXPECT_TRUE(has(f2, {P0, P1}));
}

TEST(PiDelta, Examples) {
  FiniteBooleanAlgebra A(2);
  const std::size_t U = proposition_universe(A);
  const std::vector<ElementSet> pi{A.atom(0), A.atom(1)};
  // the ultrafilter at atom 0: {atom0, 1}
  const ElementSet D(U, {A.atom(0).mask(), A.one().mask()});
  auto r = pi_delta_equivalence_check(e(0), A, pi, D);
  EXPECT_TRUE(r.generic);
  EXPECT_TRUE(r.delta);
  EXPECT_TRUE(r.pi_in_d);
  r = pi_delta_equivalence_check(neg(e(0)), A, pi, D);
  EXPECT_TRUE(r.generic);
  EXPECT_FALSE(r.delta);
  EXPECT_FALSE(r.pi_in_d);
  // {1} is not generic for the join and the equivalence breaks
  const ElementSet top(U, {A.one().mask()});
  r = pi_delta_equivalence_check(BoolExpr::join({e(0), e(1)}), A, pi, top);
  EXPECT_FALSE(r.generic);
  EXPECT_FALSE(r.agree());
  EXPECT_THROW(pi_delta_equivalence_check(e(0), A, pi, ElementSet(U, {std::size_t{0}})), DomainError);
}

TEST(PiDelta, RandomCorpusNeverViolates) {
  std::mt19937_64 rng(23);
  std::size_t generic_cases = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    FiniteBooleanAlgebra A(k);
    const auto pre = propositional_prefilters(A);
    for (int t = 0; t < 150; ++t) {
      std::vector<ElementSet> pi;
      for (int i = 0; i < 3; ++i) pi.push_back(A.element(rng() & ((1U << k) - 1)));
      const auto E = random_expr(rng, 3, 3, 2);
      for (const auto& D : pre) {
        const auto r = pi_delta_equivalence_check(E, A, pi, D);
        if (r.generic) {
          ++generic_cases;
          ASSERT_TRUE(r.agree()) << print(E);
        }
      }
    }
  }
  EXPECT_GT(generic_cases, 1000U);
}

}  // namespace
