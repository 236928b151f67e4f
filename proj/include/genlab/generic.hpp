#pragma once

// Generic filters by the descending-sequence construction, contextual
// product posets, and the truncated Born-statistics simulator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "genlab/element_set.hpp"
#include "genlab/error.hpp"
#include "genlab/poset.hpp"

namespace genlab {

enum class ChooserPolicy { Lexicographic, SeededRandom };

struct GenericBuildSpec {
  const FinitePoset* poset = nullptr;
  DenseFamily family;
  Element start = 0;
  ChooserPolicy policy = ChooserPolicy::Lexicographic;
  std::uint64_t seed = 0;
};

struct GenericBuildStep {
  std::size_t family_index;
  Element before;
  Element after;
  /// The chosen q ∈ Sₙ, or the poset size when pₙ was incompatible with all of Sₙ.
  Element chosen;
};

struct GenericBuildResult {
  ElementSet filter;
  std::vector<Element> sequence;
  std::vector<GenericBuildStep> trace;
};

/// At step n, if pₙ is compatible with some q ∈ Sₙ move to a common
/// extension; otherwise keep pₙ. Returns the upward closure of the sequence.
inline GenericBuildResult build_generic(const GenericBuildSpec& spec) {
  if (!spec.poset) throw InputError("generic build needs a poset");
  const FinitePoset& P = *spec.poset;
  P.check(spec.start);
  for (const auto& S : spec.family)
    if (S.universe() != P.size()) throw InputError("family member is not a subset of the poset");
  std::mt19937_64 rng(spec.seed);
  auto pick = [&](const ElementSet& X) -> Element {
    if (spec.policy == ChooserPolicy::Lexicographic) return X.first();
    const auto m = X.members();
    return m[rng() % m.size()];
  };
  GenericBuildResult out{P.empty_set(), {spec.start}, {}};
  Element p = spec.start;
  for (std::size_t n = 0; n < spec.family.size(); ++n) {
    const ElementSet cands = spec.family[n] & P.compatible_with(p);
    GenericBuildStep st{n, p, p, P.size()};
    if (!cands.empty()) {
      st.chosen = pick(cands);
      p = pick(P.down(p) & P.down(st.chosen));
    }
    st.after = p;
    out.trace.push_back(st);
    out.sequence.push_back(p);
  }
  out.filter = P.up(p);
  return out;
}

/// Binary strings of length ≤ depth, ordered by extension (longer is
/// stronger). Canonical order: by length, then lexicographic; the empty
/// string is named "-".
inline FinitePoset binary_string_poset(std::size_t depth) {
  if (depth > 12) throw CapRefusal("binary string poset depth", 12);
  std::vector<std::string> names;
  for (std::size_t len = 0; len <= depth; ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      std::string s;
      for (std::size_t i = 0; i < len; ++i) s += ((v >> (len - 1 - i)) & 1U) ? '1' : '0';
      names.push_back(s.empty() ? "-" : s);
    }
  auto str = [](const std::string& n) { return n == "-" ? std::string() : n; };
  std::vector<std::pair<Element, Element>> pairs;
  for (Element a = 0; a < names.size(); ++a)
    for (Element b = 0; b < names.size(); ++b) {
      const std::string sa = str(names[a]), sb = str(names[b]);
      if (sa.size() >= sb.size() && sa.compare(0, sb.size(), sb) == 0) pairs.emplace_back(a, b);
    }
  return FinitePoset(std::move(names), pairs);
}

// ---------------------------------------------------------------------------

/// Product of factor posets: conditions are coordinate tuples with at most
/// `support` non-top coordinates, ordered coordinatewise.
struct ContextualProduct {
  std::vector<FinitePoset> factors;  // each with a top
  std::vector<Element> tops;
  std::vector<std::vector<Element>> coords;
  FinitePoset poset;
  std::size_t support = 0;

  /// {c : cᵢ ∈ D}.
  ElementSet lift(std::size_t i, const ElementSet& D) const {
    ElementSet r = poset.empty_set();
    for (std::size_t c = 0; c < coords.size(); ++c)
      if (D.contains(coords[c][i])) r.insert(c);
    return r;
  }
  /// {cᵢ : c ∈ G}.
  ElementSet project(const ElementSet& G, std::size_t i) const {
    ElementSet r = factors.at(i).empty_set();
    G.for_each([&](std::size_t c) { r.insert(coords[c][i]); });
    return r;
  }
};

/// A factor without a maximum gets one adjoined, named "T".
inline FinitePoset with_top(const FinitePoset& P) {
  if (P.top() < P.size()) return P;
  std::vector<std::string> names = P.names();
  names.push_back("T");
  std::vector<std::pair<Element, Element>> pairs;
  for (Element a = 0; a < P.size(); ++a) {
    pairs.emplace_back(a, P.size());
    P.up(a).for_each([&](Element b) { pairs.emplace_back(a, b); });
  }
  return FinitePoset(std::move(names), pairs);
}

inline ContextualProduct contextual_product(const std::vector<FinitePoset>& posets, std::size_t support,
                                            std::size_t cap = 4096) {
  if (posets.empty()) throw InputError("contextual product needs at least one factor");
  ContextualProduct cp;
  cp.support = support;
  for (const auto& f : posets) {
    cp.factors.push_back(with_top(f));
    cp.tops.push_back(cp.factors.back().top());
  }
  const std::size_t k = cp.factors.size();
  std::vector<Element> cur(k, 0);
  // odometer over all tuples, keeping those within the support bound
  for (bool done = false; !done;) {
    std::size_t nontop = 0;
    for (std::size_t i = 0; i < k; ++i) nontop += cur[i] != cp.tops[i];
    if (nontop <= support) {
      if (cp.coords.size() >= cap) throw CapRefusal("contextual product too large", cap);
      cp.coords.push_back(cur);
    }
    done = true;
    for (std::size_t i = k; i-- > 0;) {
      if (++cur[i] < cp.factors[i].size()) {
        done = false;
        break;
      }
      cur[i] = 0;
    }
  }
  std::vector<std::string> names;
  for (const auto& c : cp.coords) {
    std::string s = "(";
    for (std::size_t i = 0; i < k; ++i) s += (i ? "," : "") + cp.factors[i].name(c[i]);
    names.push_back(s + ")");
  }
  std::vector<std::pair<Element, Element>> pairs;
  for (Element a = 0; a < cp.coords.size(); ++a)
    for (Element b = 0; b < cp.coords.size(); ++b) {
      bool le = true;
      for (std::size_t i = 0; i < k && le; ++i) le = cp.factors[i].leq(cp.coords[a][i], cp.coords[b][i]);
      if (le) pairs.emplace_back(a, b);
    }
  cp.poset = FinitePoset(std::move(names), pairs);
  return cp;
}

/// Checks, for every factor and every dense subset of it (exhaustive up to
/// 16 factor elements), that the lifted set is dense in the product. Returns
/// an empty string on success.
inline std::string verify_lift_density(const ContextualProduct& cp) {
  for (std::size_t i = 0; i < cp.factors.size(); ++i) {
    const auto& F = cp.factors[i];
    if (F.size() > 16) throw CapRefusal("factor too large for exhaustive density check", 16);
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << F.size()); ++m) {
      const ElementSet D = ElementSet::from_mask(F.size(), m);
      if (!is_dense(F, D)) continue;
      if (!is_dense(cp.poset, cp.lift(i, D)))
        return "lift of " + F.format(D) + " from factor " + std::to_string(i) + " is not dense";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Born statistics. Conditions are binary strings of length ≤ N (basic
// intervals of the depth-N cylinder algebra), stronger when longer. The band
// family D(M,N') holds the strings with some n in (N', |σ|] such that
// |q − mean(σ[0,n))| < 1/M; the bit-decider D_k holds strings longer than k.

struct BandEntry {
  std::size_t M = 0;
  std::size_t n_prime = 0;
  std::size_t step = 0;
  bool met = false;
  /// Met: the witnessing prefix length. Decided against: the length of the
  /// condition that had no extension in the family.
  std::size_t n = 0;
};

struct BornRun {
  double q = 0.5;
  std::size_t N = 0;
  std::size_t M_max = 0;
  std::size_t N_max = 0;
  ChooserPolicy policy = ChooserPolicy::Lexicographic;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> bits;
  std::vector<BandEntry> certificate;
  /// Seeded policy only: a band was reached by lexicographic extension after
  /// the sampled continuation ran out of room.
  bool fallback_used = false;

  double mean() const {
    if (bits.empty()) return 0;
    std::size_t c = 0;
    for (auto b : bits) c += b;
    return static_cast<double>(c) / static_cast<double>(bits.size());
  }
};

inline bool in_band(double q, std::size_t ones, std::size_t n, std::size_t M) {
  return std::abs(q - static_cast<double>(ones) / static_cast<double>(n)) < 1.0 / static_cast<double>(M);
}

/// Smallest n in [lo, hi] for which some count c ∈ [base, base + (n − L)]
/// is in band, with the least such c; returns {0,0} if none.
inline std::pair<std::size_t, std::size_t> first_band_extension(double q, std::size_t M, std::size_t L,
                                                                 std::size_t base, std::size_t lo, std::size_t hi) {
  for (std::size_t n = std::max(lo, L); n <= hi; ++n) {
    if (n == 0) continue;
    // band is an open interval of counts; find the least c in it
    const double lo_c = (q - 1.0 / static_cast<double>(M)) * static_cast<double>(n);
    std::size_t c = lo_c < static_cast<double>(base) ? base : static_cast<std::size_t>(std::floor(lo_c));
    for (; c <= base + (n - L); ++c) {
      if (in_band(q, c, n, M)) return {n, c};
      if (static_cast<double>(c) > (q + 1.0 / static_cast<double>(M)) * static_cast<double>(n) + 1) break;
    }
  }
  return {0, 0};
}

inline constexpr std::size_t kMaxBornLength = std::size_t{1} << 20;

inline BornRun born_simulate(double q, std::size_t N, std::size_t M_max, std::size_t N_max, ChooserPolicy policy,
                             std::uint64_t seed = 0) {
  if (!(q > 0 && q < 1)) throw InputError("q must lie in (0,1)");
  if (N == 0 || N > kMaxBornLength) throw InputError("N must lie in [1, 2^20]");
  BornRun run{q, N, M_max, N_max, policy, seed, {}, {}, false};
  if (M_max > 0) {
    if (N_max >= N) throw DomainError("infeasible: N_max must be below N");
    if (first_band_extension(q, M_max, 0, 0, N_max + 1, N).first == 0)
      throw DomainError("infeasible: no length in (N_max, N] admits the 1/M_max band");
  }
  // Common uniforms: bit k of a sampled continuation is U_k < q.
  std::vector<double> U;
  if (policy == ChooserPolicy::SeededRandom) {
    std::mt19937_64 rng(seed);
    U.resize(N);
    for (auto& u : U) u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  std::vector<std::uint8_t>& s = run.bits;
  std::vector<std::size_t> ones{0};  // ones[n] = number of ones in s[0,n)
  auto push = [&](std::uint8_t b) {
    s.push_back(b);
    ones.push_back(ones.back() + b);
  };
  std::size_t step = 0;
  for (std::size_t M = 1; M <= M_max; ++M)
    for (std::size_t Np = 0; Np <= N_max; ++Np, ++step) {
      BandEntry e{M, Np, step, false, 0};
      const std::size_t L = s.size();
      for (std::size_t n = Np + 1; n <= L; ++n)
        if (in_band(q, ones[n], n, M)) {
          e.met = true;
          e.n = n;
          break;
        }
      if (!e.met) {
        const auto [n, c] = first_band_extension(q, M, L, ones[L], std::max(L + 1, Np + 1), N);
        if (n == 0) {
          e.n = L;
        } else {
          e.met = true;
          bool sampled = false;
          if (policy == ChooserPolicy::SeededRandom) {
            while (s.size() < N) {
              push(U[s.size()] < q ? 1 : 0);
              if (s.size() > Np && in_band(q, ones.back(), s.size(), M)) {
                sampled = true;
                break;
              }
            }
            if (!sampled) {
              s.resize(L);
              ones.resize(L + 1);
              run.fallback_used = true;
            }
          }
          if (sampled) {
            e.n = s.size();
          } else {
            const std::size_t r = c - ones[L];
            for (std::size_t i = L; i < n - r; ++i) push(0);
            for (std::size_t i = 0; i < r; ++i) push(1);
            e.n = n;
          }
        }
      }
      run.certificate.push_back(e);
    }
  // bit-deciders D_0 .. D_{N-1}
  while (s.size() < N) push(policy == ChooserPolicy::SeededRandom ? (U[s.size()] < q ? 1 : 0) : 0);
  return run;
}

/// Independent re-check of every certificate entry against the emitted bits.
/// Returns an empty string when all entries hold.
inline std::string verify_born_certificate(const BornRun& run) {
  if (run.bits.size() != run.N) return "sequence length differs from N";
  if (run.certificate.size() != run.M_max * (run.M_max ? run.N_max + 1 : 0)) return "certificate has wrong size";
  std::vector<std::size_t> ones(run.N + 1, 0);
  for (std::size_t i = 0; i < run.N; ++i) ones[i + 1] = ones[i] + run.bits[i];
  std::size_t idx = 0;
  for (std::size_t M = 1; M <= run.M_max; ++M)
    for (std::size_t Np = 0; Np <= run.N_max; ++Np, ++idx) {
      const auto& e = run.certificate[idx];
      if (e.M != M || e.n_prime != Np) return "certificate entry out of order at " + std::to_string(idx);
      const std::size_t c = ones[std::min(e.n, run.N)];
      if (e.met) {
        if (e.n <= Np || e.n > run.N) return "witness length out of range at " + std::to_string(idx);
        const double mean = static_cast<double>(c) / static_cast<double>(e.n);
        if (!(std::abs(run.q - mean) < 1.0 / static_cast<double>(M)))
          return "witness prefix misses the band at " + std::to_string(idx);
      } else {
        // no n in (N', N] may be reachable from the prefix of length e.n
        for (std::size_t n = Np + 1; n <= run.N; ++n) {
          std::size_t lo = 0, hi = 0;
          if (n <= e.n) {
            lo = hi = ones[n];
          } else {
            lo = c;
            hi = c + (n - e.n);
          }
          for (std::size_t k = lo; k <= hi; ++k)
            if (in_band(run.q, k, n, M)) return "family decided against but reachable at " + std::to_string(idx);
        }
      }
    }
  return {};
}

struct FrequencyThresholds {
  double z_max = 4.0;
  std::vector<std::size_t> block_sizes{16, 64, 256};
};

struct BlockResult {
  std::size_t block = 0;
  std::size_t blocks = 0;
  double z = 0;
  bool flagged = false;
};

struct FrequencyReport {
  std::size_t n = 0;
  double mean = 0;
  double deviation = 0;
  double mean_z = 0;
  std::size_t longest_run = 0;
  std::size_t runs = 0;
  double runs_z = 0;
  bool runs_flagged = false;
  std::vector<BlockResult> block_tests;
  bool any_flagged() const {
    return runs_flagged || std::any_of(block_tests.begin(), block_tests.end(), [](const BlockResult& b) { return b.flagged; });
  }
};

/// Descriptive battery: mean and deviation from q, longest run, the
/// Wald–Wolfowitz runs statistic, and block-frequency χ² (as a z value).
inline FrequencyReport frequency_report(const std::vector<std::uint8_t>& f, double q,
                                        const FrequencyThresholds& th = {}) {
  if (!(q > 0 && q < 1)) throw InputError("q must lie in (0,1)");
  FrequencyReport r;
  r.n = f.size();
  if (f.empty()) return r;
  const double n = static_cast<double>(f.size());
  std::size_t n1 = 0, run = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    n1 += f[i];
    run = (i > 0 && f[i] == f[i - 1]) ? run + 1 : 1;
    r.longest_run = std::max(r.longest_run, run);
    if (i == 0 || f[i] != f[i - 1]) ++r.runs;
  }
  r.mean = static_cast<double>(n1) / n;
  r.deviation = std::abs(r.mean - q);
  r.mean_z = (r.mean - q) / std::sqrt(q * (1 - q) / n);
  const double n0 = n - static_cast<double>(n1);
  const double mu = 2 * n0 * static_cast<double>(n1) / n + 1;
  const double var = (mu - 1) * (mu - 2) / (n - 1);
  if (var > 0) {
    r.runs_z = (static_cast<double>(r.runs) - mu) / std::sqrt(var);
    r.runs_flagged = std::abs(r.runs_z) > th.z_max;
  } else {
    // a single symbol: the statistic is degenerate and always flagged
    r.runs_z = std::numeric_limits<double>::infinity();
    r.runs_flagged = true;
  }
  for (std::size_t m : th.block_sizes) {
    BlockResult b;
    b.block = m;
    b.blocks = f.size() / m;
    if (m == 0 || b.blocks == 0) {
      r.block_tests.push_back(b);
      continue;
    }
    double chi2 = 0;
    for (std::size_t k = 0; k < b.blocks; ++k) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < m; ++i) c += f[k * m + i];
      const double pi = static_cast<double>(c) / static_cast<double>(m);
      chi2 += static_cast<double>(m) * (pi - q) * (pi - q) / (q * (1 - q));
    }
    const double B = static_cast<double>(b.blocks);
    b.z = (chi2 - B) / std::sqrt(2 * B);
    b.flagged = std::abs(b.z) > th.z_max;
    r.block_tests.push_back(b);
  }
  return r;
}

}  // namespace genlab
