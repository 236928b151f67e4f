#include <gtest/gtest.h>

#include <algorithm>
#include <tuple>

#include "support.hpp"

using namespace genlab;
using namespace genlab::test;

namespace {

HFSet hf(const char* t) { return parse_hf(t); }
Sentence::Term nm(const PName& x) { return Sentence::name(x); }

std::vector<ElementSet> filters_of(const FinitePoset& P) {
  std::vector<ElementSet> out;
  for (const auto& F : all_subsets(P.size()))
    if (brute_is_filter(P, F)) out.push_back(F);
  return out;
}

// x = {[0̌, a]} over {a, b, 1}
PName zero_at_a(const FinitePoset& P) { return PName::make({{PName(), P.index("a")}}); }

TEST(HF, ParseAndPrint) {
  EXPECT_TRUE(hf("{}").empty());
  EXPECT_EQ(hf("{{},{{}}}"), HFSet::ordinal(2));
  EXPECT_EQ(hf(" { {} , {} } "), HFSet::ordinal(1));
  EXPECT_EQ(HFSet::ordinal(3).rank(), 3U);
  EXPECT_EQ(HFSet::ordinal(2).to_string(), "{{},{{}}}");
  for (const char* bad : {"", "{", "{}}", "{{}", "{x}", "{},{}"}) {
    try {
      parse_hf(bad);
      FAIL() << bad;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find("position"), std::string::npos);
    }
  }
}

TEST(HF, UniverseCountsAndRoundTrip) {
  const std::size_t sizes[] = {0, 1, 2, 4, 16};
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_EQ(hf_universe(k).size(), sizes[k]);
  const auto V = hf_universe(4);
  for (const auto& x : V) {
    ASSERT_LT(x.rank(), 4U);
    ASSERT_EQ(parse_hf(x.to_string()), x);
    for (const auto& y : x.members()) ASSERT_TRUE(std::find(V.begin(), V.end(), y) != V.end());
  }
  EXPECT_THROW(hf_universe(6), CapRefusal);
}

TEST(Collapse, Examples) {
  const auto j = transitive_collapse(3, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(j[0], HFSet::ordinal(0));
  EXPECT_EQ(j[1], HFSet::ordinal(1));
  EXPECT_EQ(j[2], HFSet::ordinal(2));
  EXPECT_TRUE(transitive_collapse(1, {})[0].empty());
  try {
    transitive_collapse(2, {});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "extensionality violated at <0,1>");
  }
  try {
    transitive_collapse(2, {{0, 1}, {1, 0}});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "not well-founded");
  }
  EXPECT_THROW(transitive_collapse(2, {{0, 5}}), InputError);
}

// Oracle: a relation is well-founded iff it has no cycle (DFS), extensional
// iff preimages differ; the collapse is then checked against the relation.
TEST(Collapse, ExhaustiveUpToFourNodes) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t bits = n * n;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << bits); ++r) {
      std::vector<std::uint64_t> pre(n, 0);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if ((r >> (x * n + y)) & 1U) pre[y] |= std::uint64_t{1} << x;
      std::vector<int> color(n, 0);
      bool cycle = false;
      auto dfs = [&](auto&& self, std::size_t y) -> void {
        color[y] = 1;
        for (std::size_t x = 0; x < n; ++x)
          if ((pre[y] >> x) & 1U) {
            if (color[x] == 1) cycle = true;
            else if (color[x] == 0) self(self, x);
          }
        color[y] = 2;
      };
      for (std::size_t y = 0; y < n; ++y)
        if (color[y] == 0) dfs(dfs, y);
      bool ext = true;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) ext = ext && pre[a] != pre[b];
      const auto chk = check_collapse_input(pre);
      if (cycle) {
        ASSERT_EQ(chk.status, CollapseStatus::NotWellFounded);
        ASSERT_THROW(transitive_collapse_masks(pre), DomainError);
      } else if (!ext) {
        ASSERT_EQ(chk.status, CollapseStatus::NotExtensional);
        ASSERT_EQ(pre[chk.n], pre[chk.m]);
      } else {
        ASSERT_EQ(chk.status, CollapseStatus::Ok);
        const auto j = transitive_collapse_masks(pre);
        ASSERT_TRUE(verify_collapse(pre, j));
        for (std::size_t y = 0; y < n; ++y) ASSERT_EQ(j[y].size(), static_cast<std::size_t>(__builtin_popcountll(pre[y])));
      }
    }
  }
}

TEST(Names, CheckNamesEvaluateToTheirSets) {
  for (const auto& P : {abc(), antichain_top(4)}) {
    const auto filters = filters_of(P);
    for (const auto& a : hf_universe(5)) {
      const auto x = check_name(a, P);
      ASSERT_EQ(x.rank(), a.rank());
      for (const auto& G : filters) ASSERT_EQ(eval_name(x, G), a);
    }
  }
  EXPECT_TRUE(eval_name(check_name(HFSet(), abc()), abc().all()).empty());
  EXPECT_THROW(check_name(HFSet::ordinal(3), abc(), 2), CapRefusal);
  EXPECT_THROW(check_name(HFSet::ordinal(1), FinitePoset({"a", "b"}, {})), DomainError);
}

TEST(Names, CanonicalNameEvaluatesToTheFilter) {
  for (const auto& P : poset_suite(60)) {
    if (P.top() == P.size()) continue;
    const auto g = gname(P);
    for (const auto& G : filters_of(P)) {
      std::vector<HFSet> expect;
      G.for_each([&](Element p) { expect.push_back(element_set(p)); });
      ASSERT_EQ(eval_name(g, G), HFSet::make(expect));
    }
  }
  const auto P = abc();
  EXPECT_EQ(eval_name(gname(P), P.up(P.index("a"))), HFSet::make({element_set(P.index("a")), element_set(P.index("1"))}));
}

TEST(Names, EvalExamples) {
  const auto P = abc();
  const auto x = zero_at_a(P);
  EXPECT_EQ(eval_name(x, P.up(P.index("a"))), HFSet::ordinal(1));
  EXPECT_EQ(eval_name(x, P.up(P.index("b"))), HFSet());
  EXPECT_EQ(eval_name(PName(), P.all()), HFSet());
}

TEST(PairRank, WellOrderPositions) {
  // position in the list sorted by (max, min, first-is-strictly-larger)
  std::vector<std::tuple<std::size_t, std::size_t, int, std::size_t, std::size_t>> order;
  for (std::size_t a = 0; a <= 6; ++a)
    for (std::size_t b = 0; b <= 6; ++b) order.emplace_back(std::max(a, b), std::min(a, b), a > b, a, b);
  std::sort(order.begin(), order.end());
  std::size_t pos = 0;
  for (const auto& [m, k, f, a, b] : order) {
    if (m > 4) break;
    EXPECT_EQ(pair_rank(a, b), pos++) << a << "," << b;
  }
  EXPECT_EQ(pair_rank(0, 0), 0U);
  EXPECT_EQ(pair_rank(1, 0), pair_rank(0, 1) + 1);
}

TEST(PairRank, RecursionDescends) {
  for (std::size_t r0 = 0; r0 <= 8; ++r0)
    for (std::size_t r1 = 0; r1 <= 8; ++r1) {
      for (std::size_t c = 0; c < r1; ++c) {
        ASSERT_LT(pair_rank(c, r0), pair_rank(r0, r1));  // ∈ step
        ASSERT_LT(pair_rank(c, r0), pair_rank(r0, r1));  // = step, right child
      }
      for (std::size_t c = 0; c < r0; ++c) ASSERT_LT(pair_rank(c, r1), pair_rank(r0, r1));
    }
}

TEST(BooleanValues, Examples) {
  const auto P = abc();
  ForcingSession S(P, hf_universe(4));
  const auto& A = S.algebra();
  const PName zero;
  EXPECT_EQ(S.bv_eq(zero, zero), A.one());
  EXPECT_EQ(S.bv_in(zero, zero), A.zero());
  const auto x = zero_at_a(P);
  EXPECT_EQ(S.reg().to_poset_set(S.bv_eq(x, check_name(HFSet::ordinal(1), P))), P.set_of({"a"}));
  const auto a_in_G = Sentence::in(nm(check_name(element_set(P.index("a")), P)), nm(gname(P)));
  EXPECT_EQ(S.reg().to_poset_set(S.bv_sentence(a_in_G)), P.set_of({"a"}));
  EXPECT_THROW(S.bv_eq(PName::make({{PName(), 7}}), zero), DomainError);
}

TEST(BooleanValues, CheckNamesAreDecided) {
  const auto P = abc();
  ForcingSession S(P, {});
  const auto V = hf_universe(4);
  for (const auto& a : V)
    for (const auto& b : V) {
      const auto va = check_name(a, P), vb = check_name(b, P);
      ASSERT_EQ(S.bv_eq(va, vb), a == b ? S.algebra().one() : S.algebra().zero());
      ASSERT_EQ(S.bv_in(va, vb), b.contains(a) ? S.algebra().one() : S.algebra().zero());
    }
}

TEST(BooleanValues, EqualityIsAnEquivalence) {
  const auto P = abc();
  ForcingSession S(P, {});
  const auto& A = S.algebra();
  auto names = rank_one_names(P);
  const auto base = names;
  // rank-2 names with one or two pairs
  std::vector<PName::Pair> pairs;
  for (const auto& y : base)
    for (Element p = 0; p < P.size(); ++p) pairs.emplace_back(y, p);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.rank() == 1) names.push_back(PName::make({pairs[i]}));
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i].first.rank() == 1 || pairs[j].first.rank() == 1) names.push_back(PName::make({pairs[i], pairs[j]}));
  }
  ASSERT_GT(names.size(), 250U);
  for (const auto& x : names) {
    ASSERT_EQ(S.bv_eq(x, x), A.one());
    for (const auto& y : names) ASSERT_EQ(S.bv_eq(x, y), S.bv_eq(y, x));
  }
  std::mt19937_64 rng(5);
  std::vector<PName> sample = base;
  while (sample.size() < 90) sample.push_back(names[rng() % names.size()]);
  for (const auto& x : sample)
    for (const auto& y : sample)
      for (const auto& z : sample) ASSERT_TRUE(A.leq(A.meet(S.bv_eq(x, y), S.bv_eq(y, z)), S.bv_eq(x, z)));
}

TEST(BooleanValues, GroundMembership) {
  const auto P = abc();
  ForcingSession S(P, hf_universe(3));
  const auto& A = S.algebra();
  EXPECT_EQ(S.bv_in_m(check_name(HFSet::ordinal(2), P)), A.one());
  EXPECT_EQ(S.bv_in_m(zero_at_a(P), {HFSet(), HFSet::ordinal(1)}), A.one());
  EXPECT_EQ(S.bv_in_m(zero_at_a(P), {}), A.zero());
  EXPECT_EQ(S.bv_in_m(zero_at_a(P), {HFSet()}), S.reg().from_poset_set(P.set_of({"b"})));
}

TEST(BooleanValues, Sentences) {
  const auto P = antichain_top(3);
  ForcingSession S(P, hf_universe(3));
  const auto& A = S.algebra();
  const PName zero, one = check_name(HFSet::ordinal(1), P);
  const auto ex = Sentence::exists(0, {zero, one}, Sentence::eq(Sentence::var(0), nm(zero)));
  EXPECT_EQ(S.bv_sentence(ex), A.one());
  const auto all = Sentence::forall(0, {zero, one}, Sentence::eq(Sentence::var(0), nm(zero)));
  EXPECT_EQ(S.bv_sentence(all), A.zero());
  std::mt19937_64 rng(3);
  auto names = rank_one_names(P);
  names.push_back(gname(P));
  for (int t = 0; t < 200; ++t) {
    const auto s = random_sentence(rng, names, 3);
    ASSERT_EQ(S.bv_sentence(Sentence::disj(s, Sentence::neg(s))), A.one());
    ASSERT_EQ(S.bv_sentence(Sentence::neg(Sentence::neg(s))), S.bv_sentence(s));
  }
}

TEST(Parser, Examples) {
  const auto P = abc();
  EXPECT_EQ(parse_name("gname", P), gname(P));
  EXPECT_EQ(parse_name("check({{}})", P), check_name(HFSet::ordinal(1), P));
  EXPECT_EQ(parse_name("{[check({}),a]}", P), zero_at_a(P));
  EXPECT_EQ(parse_name("{}", P), PName());
  EXPECT_THROW(parse_name("{[check({}),z]}", P), InputError);
  EXPECT_THROW(parse_sentence("in(gname)", P), InputError);
  // free variables parse but cannot be valued
  const auto open = parse_sentence("forall(u0,[gname],eq(u1,gname))", P);
  EXPECT_THROW(ForcingSession(P, {}).bv_sentence(open), InputError);
  const auto s = parse_sentence("exists(u0,[check({}),gname],in(u0,gname))", P);
  EXPECT_EQ(s.kind(), Sentence::Kind::Exists);
  EXPECT_EQ(s.bound().size(), 2U);
}

TEST(Parser, RoundTripCorpus) {
  const auto P = abc();
  ForcingSession S(P, hf_universe(3));
  std::mt19937_64 rng(8);
  auto names = rank_one_names(P);
  for (int i = 0; i < 6; ++i) names.push_back(random_name(rng, P, names, 2));
  names.push_back(gname(P));
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_sentence(rng, names, 3);
    const auto text = s.to_string(&P);
    const auto back = parse_sentence(text, P);
    ASSERT_EQ(back.to_string(&P), text);
    ASSERT_EQ(S.bv_sentence(back), S.bv_sentence(s)) << text;
  }
}

std::vector<Sentence> corpus_for(const FinitePoset& P, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  auto names = rank_one_names(P);
  for (const auto& a : hf_universe(3)) names.push_back(check_name(a, P));
  for (int i = 0; i < 6; ++i) names.push_back(random_name(rng, P, names, 2));
  for (int i = 0; i < 3; ++i) names.push_back(random_name(rng, P, names, 3));
  names.push_back(gname(P));
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_sentence(rng, names, 1 + i % 4));
  return out;
}

TEST(TruthLemma, AgreesOnGeneratedCorpora) {
  for (const auto& P : {abc(), antichain_top(4)}) {
    ForcingSession S(P, hf_universe(4));
    const auto corpus = corpus_for(P, 17, 150);
    const auto rep = truth_lemma_check(S, corpus);
    EXPECT_EQ(rep.generics, P.minimal_elements().count());
    EXPECT_EQ(rep.checks, rep.generics * corpus.size());
    EXPECT_TRUE(rep.discrepancies.empty()) << corpus[rep.discrepancies.front().sentence].to_string(&P);
  }
}

TEST(TruthLemma, CheckNameEqualitiesAgreeTrivially) {
  const auto P = abc();
  ForcingSession S(P, hf_universe(3));
  std::vector<Sentence> corpus;
  for (const auto& a : hf_universe(3))
    for (const auto& b : hf_universe(3)) corpus.push_back(Sentence::eq(nm(check_name(a, P)), nm(check_name(b, P))));
  EXPECT_TRUE(truth_lemma_check(S, corpus).discrepancies.empty());
}

TEST(TruthLemma, CorruptedMemoIsDetected) {
  const auto P = abc();
  ForcingSession S(P, hf_universe(3));
  const auto x = zero_at_a(P), one = check_name(HFSet::ordinal(1), P);
  const auto truth = S.bv_eq(x, one);
  S.inject_memo(false, x, one, S.algebra().complement(truth));
  const auto rep = truth_lemma_check(S, {Sentence::eq(nm(x), nm(one))});
  ASSERT_EQ(rep.discrepancies.size(), 2U);
  EXPECT_EQ(rep.discrepancies[0].sentence, 0U);
}

}  // namespace
