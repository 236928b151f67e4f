#include <gtest/gtest.h>

#include <set>

#include "genlab/io.hpp"
#include "support.hpp"

using namespace genlab;
using namespace genlab::test;

namespace {

AbstractPS load(const std::string& file) {
  return io::system_from_json(io::read_json_file(std::string(GENLAB_DATA_DIR) + "/systems/" + file)).abstract;
}
AbstractPS malley() { return load("malley.json"); }
AbstractPS spin(std::size_t k) {
  const std::vector<std::array<double, 3>> all{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return to_abstract(spin_half_system({all.begin(), all.begin() + k}));
}
AbstractPS pa(std::size_t atoms) { return to_abstract(FiniteBooleanAlgebra(atoms)); }

ElementSet one_set(const AbstractPS& R, std::size_t p) { return ElementSet(R.size(), {p}); }

// Oracles over every subset of the system (small systems only).
bool brute_closed(const AbstractPS& R, const ElementSet& F) {
  if (!F.contains(R.one())) return false;
  for (std::size_t p = 0; p < R.size(); ++p) {
    if (!F.contains(p)) continue;
    for (std::size_t q = 0; q < R.size(); ++q) {
      if (R.leq(p, q) && !F.contains(q)) return false;
      if (F.contains(q) && R.commute(p, q) && !F.contains(R.meet(p, q))) return false;
    }
  }
  return true;
}

ElementSet brute_closure(const AbstractPS& R, const ElementSet& S) {
  ElementSet out = ElementSet::full(R.size());
  for (const auto& F : all_subsets(R.size()))
    if (S.subset_of(F) && brute_closed(R, F)) out &= F;
  return out;
}

std::set<std::vector<std::size_t>> brute_semifilters(const AbstractPS& R) {
  std::set<std::vector<std::size_t>> out;
  for (const auto& F : all_subsets(R.size()))
    if (!F.contains(R.zero()) && brute_closed(R, F)) out.insert(F.members());
  return out;
}

bool brute_reductive(const AbstractPS& R) {
  for (const auto& S : all_subsets(R.size()))
    for (std::size_t P = 0; P < R.size(); ++P) {
      ElementSet T = S;
      T.insert(R.complement(P));
      if (brute_closure(R, T).contains(R.zero()) && !brute_closure(R, S).contains(P)) return false;
    }
  return true;
}

bool is_ultrasemifilter(const AbstractPS& R, const ElementSet& F) {
  if (F.contains(R.zero()) || !brute_closed(R, F)) return false;
  for (std::size_t p = 0; p < R.size(); ++p)
    if (!F.contains(p) && !F.contains(R.complement(p))) return false;
  return true;
}

std::vector<AbstractPS> small_systems() {
  return {malley(), load("nonreductive.json"), spin(1), spin(2), spin(3), pa(1), pa(2), pa(3)};
}

TEST(AbstractPS, RejectsBrokenTables) {
  const auto R = malley();
  EXPECT_EQ(R.size(), 6U);
  EXPECT_THROW(R.meet(R.index("P"), R.index("Q")), DomainError);
  // complement that is not an involution
  std::vector<std::vector<std::size_t>> meet{{0, 0, 0}, {0, 1, 2}, {0, 2, 2}};
  EXPECT_THROW(AbstractPS({"0", "1", "P"}, {{0, 1}, {0, 2}, {2, 1}}, {1, 0, 0}, meet), InputError);
  EXPECT_THROW(io::abstract_ps_from_json(io::json::parse(R"({"elements":["0","1"],"leq":[],"complement":{}})")),
               InputError);
}

TEST(Closure, Examples) {
  const auto R = malley();
  const auto P = R.index("P"), nP = R.index("~P"), Q = R.index("Q");
  EXPECT_EQ(semifilter_closure(R, one_set(R, R.one())).members, one_set(R, R.one()));
  EXPECT_EQ(semifilter_closure(R, one_set(R, P)).members, R.set_of({"P", "1"}));
  EXPECT_TRUE(semifilter_closure(R, R.set_of({"P", "~P"})).degenerate);
  EXPECT_FALSE(entails(R, one_set(R, P), Q));
  EXPECT_FALSE(is_consistent(R, R.set_of({"P", "~P"})));
  EXPECT_TRUE(is_consistent(R, R.set_of({"P", "Q"})));
  for (std::size_t p = 0; p < R.size(); ++p) EXPECT_TRUE(entails(R, one_set(R, p), R.one()));
  EXPECT_TRUE(entails(R, R.set_of({"P", "~P"}), nP));
}

TEST(Closure, MatchesIntersectionOracleAndLaws) {
  for (const auto& R : small_systems()) {
    const auto subs = all_subsets(R.size());
    for (const auto& S : subs) {
      const auto c = semifilter_closure(R, S);
      ASSERT_EQ(c.members, brute_closure(R, S)) << R.format(S);
      ASSERT_EQ(c.degenerate, c.members.contains(R.zero()));
      ASSERT_TRUE(S.subset_of(c.members));
      ASSERT_EQ(semifilter_closure(R, c.members).members, c.members);
    }
    std::mt19937_64 rng(R.size());
    for (int t = 0; t < 100; ++t) {
      const auto& S = subs[rng() % subs.size()];
      const auto T = S | subs[rng() % subs.size()];
      ASSERT_TRUE(semifilter_closure(R, S).members.subset_of(semifilter_closure(R, T).members));
    }
  }
}

TEST(Semifilters, EnumerationMatchesOracle) {
  for (const auto& R : small_systems()) {
    std::set<std::vector<std::size_t>> got;
    for (const auto& F : enumerate_semifilters(R)) got.insert(F.members());
    EXPECT_EQ(got, brute_semifilters(R));
  }
}

TEST(Reductive, BooleanAlgebrasUpToFourAtoms) {
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_TRUE(is_reductive(pa(k)).reductive) << k;
}

TEST(Reductive, NamedSystems) {
  EXPECT_TRUE(is_reductive(malley()).reductive);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(is_reductive(spin(k)).reductive);
  EXPECT_TRUE(is_reductive(load("spin3.json")).reductive);
}

TEST(Reductive, AbstractCounterexampleHasVerifiedWitness) {
  const auto R = load("nonreductive.json");
  const auto r = is_reductive(R);
  ASSERT_FALSE(r.reductive);
  ElementSet T = r.witness_set;
  T.insert(R.complement(r.witness_prop));
  EXPECT_TRUE(brute_closure(R, T).contains(R.zero()));
  EXPECT_FALSE(brute_closure(R, r.witness_set).contains(r.witness_prop));
}

TEST(Reductive, AgreesWithSubsetOracle) {
  for (const auto& R : small_systems()) {
    ASSERT_LE(R.size(), 8U);
    EXPECT_EQ(is_reductive(R).reductive, brute_reductive(R)) << R.format(ElementSet::full(R.size()));
  }
}

TEST(Reductive, RefusesLargeSystems) {
  const auto R = load("cabello18.json");
  try {
    is_reductive(R);
    FAIL() << "expected refusal";
  } catch (const CapRefusal& e) {
    EXPECT_EQ(e.cap(), 16U);
  }
}

TEST(ConditionPoset, Examples) {
  const auto CP = condition_poset(malley());
  EXPECT_EQ(CP.conditions.size(), 9U);
  EXPECT_EQ(CP.poset.minimal_elements().count(), 4U);
  EXPECT_EQ(condition_poset(pa(2)).conditions.size(), 3U);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_EQ(condition_poset(spin(k)).poset.minimal_elements().count(), 1U << k);
  // top is {1}
  const auto R = malley();
  std::size_t tops = 0;
  for (Element p = 0; p < CP.poset.size(); ++p)
    if (CP.poset.up(p).count() == 1) {
      ++tops;
      EXPECT_EQ(CP.conditions[p], one_set(R, R.one()));
    }
  EXPECT_EQ(tops, 1U);
}

TEST(ConditionPoset, ReductiveImpliesSeparative) {
  for (const auto& R : small_systems()) {
    const bool sep = is_separative(condition_poset(R).poset);
    if (is_reductive(R).reductive) {
      EXPECT_TRUE(sep);
    } else {
      std::cout << "non-reductive system, condition poset separative: " << sep << "\n";
    }
  }
}

TEST(Bracket, Examples) {
  const auto R = malley();
  const auto CP = condition_poset(R);
  EXPECT_EQ(bracket(R, CP, R.one()), CP.poset.all());
  EXPECT_EQ(bracket(R, CP, R.index("P")).count(), 3U);
  EXPECT_EQ(bracket(R, CP, R.set_of({"P", "~P"})), CP.poset.empty_set());
}

TEST(Bracket, ClosureAndMembershipAgreeWhenReductive) {
  for (const auto& R : small_systems()) {
    if (!is_reductive(R).reductive) continue;
    const auto CP = condition_poset(R);
    for (const auto& S : all_subsets(R.size())) {
      const auto c = semifilter_closure(R, S);
      if (c.degenerate) continue;
      ASSERT_EQ(bracket(R, CP, S), bracket_by_membership(CP, c.members));
    }
  }
}

TEST(TR, ValidOnReductiveSystems) {
  for (const auto& R : small_systems()) {
    if (!is_reductive(R).reductive) continue;
    const auto CP = condition_poset(R);
    const auto one = regular_algebra(CP.poset).algebra.one();
    const auto v = tR_validities(R, CP);
    EXPECT_EQ(v.upward, one);
    EXPECT_EQ(v.meets, one);
    EXPECT_EQ(v.decides, one);
    EXPECT_GT(v.commuting_subsets, 0U);
  }
}

TEST(TR, UpwardClauseHoldsEverywhere) {
  const auto R = load("nonreductive.json");
  const auto CP = condition_poset(R);
  const auto v = tR_validities(R, CP);
  EXPECT_EQ(v.upward, regular_algebra(CP.poset).algebra.one());
}

TEST(TR, DecisionClauseIffDensity) {
  for (const auto& R : small_systems()) {
    const auto CP = condition_poset(R);
    bool all_dense = true;
    for (std::size_t P = 0; P < R.size(); ++P)
      all_dense = all_dense && is_dense(CP.poset, bracket(R, CP, P) | bracket(R, CP, R.complement(P)));
    EXPECT_EQ(all_dense, tR_validities(R, CP).decides == regular_algebra(CP.poset).algebra.one());
  }
}

TEST(BooleanSubsystem, Examples) {
  const auto R = malley();
  const auto A = R.set_of({"0", "P", "~P", "1"});
  EXPECT_TRUE(boolean_subsystem_check(R, A, R.set_of({"P"})));
  EXPECT_TRUE(boolean_subsystem_check(R, A, R.set_of({"P", "~P"})));
  EXPECT_TRUE(boolean_subsystem_check(R, A, R.empty_set()));
  EXPECT_THROW(boolean_subsystem_check(R, R.set_of({"0", "P", "~P", "Q", "~Q", "1"}), R.set_of({"P"})), DomainError);
  EXPECT_THROW(boolean_subsystem_check(R, A, R.set_of({"Q"})), InputError);
  const auto S = spin(3);
  const auto a = S.set_of({"0", "S0", "~S0", "1"});
  EXPECT_TRUE(boolean_subsystem_check(S, a, S.set_of({"S0"})));
  const auto N = load("nonreductive.json");
  EXPECT_THROW(boolean_subsystem_check(N, N.set_of({"0", "A", "~A", "1"}), N.set_of({"A"})), DomainError);
}

TEST(Ultrasemifilter, Examples) {
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto R = pa(k);
    const auto F = ultrasemifilter_search(R);
    ASSERT_TRUE(F.has_value());
    EXPECT_TRUE(is_ultrasemifilter(R, *F));
  }
  const auto R = malley();
  const auto F = ultrasemifilter_search(R);
  ASSERT_TRUE(F.has_value());
  EXPECT_TRUE(is_ultrasemifilter(R, *F));
}

TEST(Ultrasemifilter, ShippedRaySetHasNone) {
  EXPECT_FALSE(ultrasemifilter_search(load("cabello18.json")).has_value());
  EXPECT_THROW(ultrasemifilter_search(load("cabello18.json"), 10), CapRefusal);
}

TEST(Ultrasemifilter, SearchAgreesWithSubsetOracle) {
  for (const auto& R : small_systems()) {
    bool any = false;
    for (const auto& F : all_subsets(R.size())) any = any || is_ultrasemifilter(R, F);
    EXPECT_EQ(ultrasemifilter_search(R).has_value(), any);
  }
}

TEST(Correspondence, UltrasemifiltersAreGenericFilters) {
  for (const auto& R : small_systems()) {
    if (!is_reductive(R).reductive) continue;
    const auto CP = condition_poset(R);
    std::set<std::vector<std::size_t>> ultra, from_generics;
    for (const auto& F : all_subsets(R.size()))
      if (is_ultrasemifilter(R, F)) ultra.insert(F.members());
    // every dense set at once: generics are the principal filters at minimal conditions
    CP.poset.minimal_elements().for_each([&](Element m) {
      const auto G = CP.poset.up(m);
      ElementSet U = R.empty_set();
      G.for_each([&](Element p) { U |= CP.conditions[p]; });
      from_generics.insert(U.members());
      // and back: the conditions inside U are exactly G
      ElementSet back = CP.poset.empty_set();
      for (Element p = 0; p < CP.poset.size(); ++p)
        if (CP.conditions[p].subset_of(U)) back.insert(p);
      EXPECT_EQ(back, G);
    });
    EXPECT_EQ(ultra, from_generics);
  }
}

TEST(MeasureTable, Examples) {
  const auto R = malley();
  const auto t = measure_table(R, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(t.mu_p[0], 0.5, 1e-12);
  EXPECT_NEAR(t.mu_q[0], 0.5, 1e-12);
  EXPECT_LE(t.max_marginal_error, 1e-12);
  // one point mass puts both P and Q at 1
  std::size_t both = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<double> w(4, 0.0);
    w[i] = 1;
    const auto s = measure_table(R, w);
    both += s.mu_p[0] == 1.0 && s.mu_q[0] == 1.0;
    EXPECT_EQ(s.mu_p[0] + s.mu_p[1], 1.0);
  }
  EXPECT_EQ(both, 1U);
  EXPECT_THROW(measure_table(R, {0.5, 0.5}), InputError);
  EXPECT_THROW(measure_table(R, {0.5, 0.5, 0.5, -0.5}), InputError);
  EXPECT_THROW(measure_table(pa(2), {1, 0}), DomainError);
}

TEST(MeasureTable, RandomWeightsSatisfyMarginals) {
  const auto R = malley();
  std::mt19937_64 rng(99);
  std::gamma_distribution<double> g(1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> w(4);
    double s = 0;
    for (auto& x : w) s += (x = g(rng));
    for (auto& x : w) x /= s;
    s = w[0] + w[1] + w[2];
    w[3] = 1.0 - s;
    const auto m = measure_table(R, w);
    ASSERT_LE(m.max_marginal_error, 1e-12);
    ASSERT_NEAR(m.mu_p[0] + m.mu_p[1], 1.0, 1e-12);
    ASSERT_NEAR(m.mu_q[0] + m.mu_q[1], 1.0, 1e-12);
  }
}

}  // namespace
