#pragma once

// Shared fixtures and brute-force oracles for the test binaries. Oracles here
// use only FinitePoset::leq so they stay independent of the cached
// compatibility tables in the library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "genlab/genlab.hpp"

namespace genlab::test {

inline FinitePoset abc() { return FinitePoset({"a", "b", "1"}, {{0, 2}, {1, 2}}); }
inline FinitePoset chain2() { return FinitePoset({"a", "1"}, {{0, 1}}); }

/// k pairwise incompatible minimal elements under a top.
inline FinitePoset antichain_top(std::size_t k) {
  std::vector<std::string> names;
  std::vector<std::pair<Element, Element>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back("m" + std::to_string(i));
    pairs.emplace_back(i, k);
  }
  names.push_back("1");
  return FinitePoset(names, pairs);
}

/// Random order on n elements: a random DAG on the index order, closed.
template <class Rng>
FinitePoset random_poset(Rng& rng, std::size_t n, double density = 0.35) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution edge(density);
  std::vector<std::pair<Element, Element>> covers;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) covers.emplace_back(perm[i], perm[j]);
  return FinitePoset::from_covers(names, covers);
}

/// The 500-poset suite on 1..6 elements used by the regular-algebra checks.
inline std::vector<FinitePoset> poset_suite(std::size_t count = 500, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::vector<FinitePoset> out{abc(), chain2(), antichain_top(4)};
  while (out.size() < count) {
    const std::size_t n = 1 + rng() % 6;
    const double d = 0.15 + 0.1 * static_cast<double>(rng() % 6);
    out.push_back(random_poset(rng, n, d));
  }
  return out;
}

inline bool brute_compatible(const FinitePoset& P, Element p, Element q) {
  for (Element r = 0; r < P.size(); ++r)
    if (P.leq(r, p) && P.leq(r, q)) return true;
  return false;
}

inline ElementSet brute_perp(const FinitePoset& P, const ElementSet& X) {
  ElementSet out(P.size());
  for (Element p = 0; p < P.size(); ++p) {
    bool ok = true;
    X.for_each([&](Element q) { ok = ok && !brute_compatible(P, p, q); });
    if (ok) out.insert(p);
  }
  return out;
}

/// { X : X = X^⊥⊥ } by scanning every subset.
inline std::vector<ElementSet> brute_regular_family(const FinitePoset& P) {
  std::vector<ElementSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << P.size()); ++m) {
    const auto X = ElementSet::from_mask(P.size(), m);
    if (brute_perp(P, brute_perp(P, X)) == X) out.push_back(X);
  }
  return out;
}

inline std::vector<ElementSet> all_subsets(std::size_t n) {
  std::vector<ElementSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.push_back(ElementSet::from_mask(n, m));
  return out;
}

inline bool brute_is_filter(const FinitePoset& P, const ElementSet& F) {
  if (F.empty()) return false;
  bool ok = true;
  F.for_each([&](Element p) {
    for (Element q = 0; q < P.size(); ++q)
      if (P.leq(p, q) && !F.contains(q)) ok = false;
    F.for_each([&](Element q) {
      bool common = false;
      F.for_each([&](Element r) { common = common || (P.leq(r, p) && P.leq(r, q)); });
      ok = ok && common;
    });
  });
  return ok;
}

}  // namespace genlab::test
