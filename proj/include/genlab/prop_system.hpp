#pragma once

// Semifilter logic on finite propositional systems: closure, entailment,
// reductivity, the condition poset of complete semifilters, the three
// sentences of the semifilter theory, ultrasemifilter search and the
// measure table for the two-question system.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "genlab/boolean_algebra.hpp"
#include "genlab/element_set.hpp"
#include "genlab/error.hpp"
#include "genlab/poset.hpp"
#include "genlab/quantum.hpp"

namespace genlab {

/// An abstract finite propositional system. `meet[p][q]` is defined (not
/// npos) exactly when p and q commute.
class AbstractPS {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  AbstractPS(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& leq_pairs,
             std::vector<std::size_t> complement, std::vector<std::vector<std::size_t>> meet)
      : order_(names, leq_pairs), names_(std::move(names)), compl_(std::move(complement)), meet_(std::move(meet)) {
    const std::size_t n = names_.size();
    if (compl_.size() != n || meet_.size() != n) throw InputError("complement/meet tables do not match element count");
    zero_ = one_ = n;
    for (std::size_t p = 0; p < n; ++p) {
      if (order_.down(p).count() == 1 && order_.up(p).count() == n) zero_ = p;
      if (order_.up(p).count() == 1 && order_.down(p).count() == n) one_ = p;
    }
    if (zero_ == n || one_ == n || zero_ == one_) throw InputError("system needs distinct 0 and 1");
    commute_.assign(n, ElementSet(n));
    for (std::size_t p = 0; p < n; ++p) {
      if (compl_[p] >= n || compl_[compl_[p]] != p) throw InputError("complement is not an involution at '" + names_[p] + "'");
      if (meet_[p].size() != n) throw InputError("meet table row has wrong length");
      for (std::size_t q = 0; q < n; ++q) {
        const std::size_t m = meet_[p][q];
        if (m == npos) continue;
        if (m >= n) throw InputError("meet table references unknown element");
        commute_[p].insert(q);
      }
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        if (commute_[p].contains(q) != commute_[q].contains(p) || meet_[p][q] != meet_[q][p])
          throw InputError("meet table is not symmetric at <" + names_[p] + "," + names_[q] + ">");
        if (order_.leq(p, q) && !order_.leq(compl_[q], compl_[p]))
          throw InputError("complement does not reverse order at <" + names_[p] + "," + names_[q] + ">");
        const std::size_t m = meet_[p][q];
        if (m != npos && (!order_.leq(m, p) || !order_.leq(m, q)))
          throw InputError("meet is not below both arguments at <" + names_[p] + "," + names_[q] + ">");
      }
    for (std::size_t p = 0; p < n; ++p) {
      if (meet_[p][p] != p) throw InputError("meet is not idempotent at '" + names_[p] + "'");
      if (meet_[p][compl_[p]] != zero_) throw InputError("P and its complement must meet in 0 at '" + names_[p] + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t p) const { return names_.at(p); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t index(const std::string& nm) const { return order_.index(nm); }
  std::size_t zero() const noexcept { return zero_; }
  std::size_t one() const noexcept { return one_; }
  std::size_t complement(std::size_t p) const { return compl_.at(p); }
  bool leq(std::size_t p, std::size_t q) const { return order_.leq(p, q); }
  bool commute(std::size_t p, std::size_t q) const { return commute_.at(p).contains(q); }
  /// Meet of commuting p and q.
  std::size_t meet(std::size_t p, std::size_t q) const {
    const std::size_t m = meet_.at(p).at(q);
    if (m == npos) throw DomainError("meet of noncommuting propositions '" + names_[p] + "','" + names_[q] + "'");
    return m;
  }
  const ElementSet& up(std::size_t p) const { return order_.up(p); }
  const ElementSet& commuting_with(std::size_t p) const { return commute_.at(p); }
  const FinitePoset& order() const noexcept { return order_; }
  ElementSet empty_set() const { return ElementSet(size()); }
  ElementSet set_of(const std::vector<std::string>& nms) const { return order_.set_of(nms); }
  std::string format(const ElementSet& s) const { return order_.format(s); }

  /// Number of {P, ∁P} pairs with P ∉ {0, 1}.
  std::size_t complementary_pairs() const { return (size() - 2) / 2; }

 private:
  FinitePoset order_;
  std::vector<std::string> names_;
  std::vector<std::size_t> compl_;
  std::vector<std::vector<std::size_t>> meet_;
  std::vector<ElementSet> commute_;
  std::size_t zero_ = 0, one_ = 0;
};

/// Exports a projection system: order, complement and commuting meets are
/// read off the matrices.
inline AbstractPS to_abstract(const PropSystem& R) {
  const std::size_t n = R.size();
  std::vector<std::pair<std::size_t, std::size_t>> leqs;
  std::vector<std::size_t> compl_(n, n);
  std::vector<std::vector<std::size_t>> meet(n, std::vector<std::size_t>(n, AbstractPS::npos));
  for (std::size_t p = 0; p < n; ++p) {
    compl_[p] = R.find(R.elements[p].complement());
    if (compl_[p] == n) throw DomainError("system is not closed under complement");
    for (std::size_t q = 0; q < n; ++q) {
      if (leq(R.elements[p], R.elements[q])) leqs.emplace_back(p, q);
      if (commutes(R.elements[p], R.elements[q])) {
        meet[p][q] = R.find(meet_commuting(R.elements[p], R.elements[q]));
        if (meet[p][q] == n) throw DomainError("system is not closed under commuting meet");
      }
    }
  }
  return AbstractPS(R.names, leqs, std::move(compl_), std::move(meet));
}

/// A finite boolean algebra as a (commutative) propositional system.
inline AbstractPS to_abstract(const FiniteBooleanAlgebra& A) {
  const auto els = A.elements();
  const std::size_t n = els.size();
  std::vector<std::string> names;
  for (const auto& e : els) names.push_back(A.format(e));
  std::vector<std::pair<std::size_t, std::size_t>> leqs;
  std::vector<std::size_t> compl_(n);
  std::vector<std::vector<std::size_t>> meet(n, std::vector<std::size_t>(n));
  for (std::size_t p = 0; p < n; ++p) {
    compl_[p] = FiniteBooleanAlgebra::index_of(A.complement(els[p]));
    for (std::size_t q = 0; q < n; ++q) {
      if (A.leq(els[p], els[q])) leqs.emplace_back(p, q);
      meet[p][q] = FiniteBooleanAlgebra::index_of(A.meet(els[p], els[q]));
    }
  }
  return AbstractPS(std::move(names), leqs, std::move(compl_), std::move(meet));
}

struct Semifilter {
  ElementSet members;
  /// Reached 0; such a closure is all of the system.
  bool degenerate = false;
};

/// Least superset of S ∪ {1} that is upward closed and closed under
/// commuting meets. Reaching 0 is flagged rather than refused.
inline Semifilter semifilter_closure(const AbstractPS& R, const ElementSet& S) {
  ElementSet F = S;
  F.insert(R.one());
  for (bool changed = true; changed;) {
    changed = false;
    ElementSet up = F;
    F.for_each([&](std::size_t p) { up |= R.up(p); });
    const auto m = up.members();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        if (R.commute(m[i], m[j])) up.insert(R.meet(m[i], m[j]));
    if (!(up == F)) {
      F = std::move(up);
      changed = true;
    }
  }
  const bool deg = F.contains(R.zero());
  return {deg ? ElementSet::full(R.size()) : F, deg};
}

inline bool entails(const AbstractPS& R, const ElementSet& S, std::size_t P) {
  return semifilter_closure(R, S).members.contains(P);
}

inline bool is_consistent(const AbstractPS& R, const ElementSet& S) { return !semifilter_closure(R, S).degenerate; }

struct PsysCaps {
  std::size_t semifilters = 20000;
  std::size_t complementary_pairs = 16;
  std::size_t commuting_subsets = std::size_t{1} << 22;
};

/// All non-degenerate semifilters, found by adding one proposition at a time
/// starting from {1}. Sorted by size, then by member list.
inline std::vector<ElementSet> enumerate_semifilters(const AbstractPS& R, const PsysCaps& caps = {}) {
  std::unordered_set<ElementSet, ElementSetHash> seen;
  std::vector<ElementSet> order;
  std::deque<ElementSet> queue;
  const auto start = semifilter_closure(R, R.empty_set()).members;
  seen.insert(start);
  order.push_back(start);
  queue.push_back(start);
  while (!queue.empty()) {
    const ElementSet F = std::move(queue.front());
    queue.pop_front();
    for (std::size_t P = 0; P < R.size(); ++P) {
      if (F.contains(P)) continue;
      ElementSet S = F;
      S.insert(P);
      auto c = semifilter_closure(R, S);
      if (c.degenerate || !seen.insert(c.members).second) continue;
      if (order.size() >= caps.semifilters) throw CapRefusal("too many semifilters", caps.semifilters);
      order.push_back(c.members);
      queue.push_back(std::move(c.members));
    }
  }
  std::sort(order.begin(), order.end(), [](const ElementSet& a, const ElementSet& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.members() < b.members();
  });
  return order;
}

struct ReductivityResult {
  bool reductive = true;
  /// Counterexample when not reductive: S ∪ {∁P} ⊩ 0 but not S ⊩ P.
  ElementSet witness_set;
  std::size_t witness_prop = 0;
};

/// Entailment depends on S only through its closure, so S ranges over the
/// non-degenerate semifilters (a degenerate S entails everything).
inline ReductivityResult is_reductive(const AbstractPS& R, const PsysCaps& caps = {}) {
  if (R.complementary_pairs() > caps.complementary_pairs)
    throw CapRefusal("system too large for the reductivity check", caps.complementary_pairs);
  for (const auto& F : enumerate_semifilters(R, caps))
    for (std::size_t P = 0; P < R.size(); ++P) {
      if (F.contains(P)) continue;
      ElementSet S = F;
      S.insert(R.complement(P));
      if (semifilter_closure(R, S).degenerate) return {false, F, P};
    }
  return {true, R.empty_set(), 0};
}

/// The complete semifilters ordered by reverse inclusion.
struct ConditionPoset {
  FinitePoset poset;
  std::vector<ElementSet> conditions;
};

inline ConditionPoset condition_poset(const AbstractPS& R, const PsysCaps& caps = {}) {
  auto conds = enumerate_semifilters(R, caps);
  std::vector<std::string> names;
  for (const auto& c : conds) names.push_back(R.format(c));
  std::vector<std::pair<Element, Element>> pairs;
  for (std::size_t p = 0; p < conds.size(); ++p)
    for (std::size_t q = 0; q < conds.size(); ++q)
      if (conds[q].subset_of(conds[p])) pairs.emplace_back(p, q);
  return {FinitePoset(std::move(names), pairs), std::move(conds)};
}

/// Conditions that include S, as a set over the condition poset.
inline ElementSet bracket_by_membership(const ConditionPoset& CP, const ElementSet& S) {
  ElementSet r = CP.poset.empty_set();
  for (std::size_t p = 0; p < CP.conditions.size(); ++p)
    if (S.subset_of(CP.conditions[p])) r.insert(p);
  return r;
}

/// [S]: regular closure of the conditions extending the complete semifilter
/// generated by S (empty when S is inconsistent).
inline ElementSet bracket(const AbstractPS& R, const ConditionPoset& CP, const ElementSet& S) {
  const auto c = semifilter_closure(R, S);
  if (c.degenerate) return CP.poset.empty_set();
  return regular_closure(CP.poset, bracket_by_membership(CP, c.members));
}

inline ElementSet bracket(const AbstractPS& R, const ConditionPoset& CP, std::size_t P) {
  ElementSet S = R.empty_set();
  S.insert(P);
  return bracket(R, CP, S);
}

struct TRValues {
  ElementSet upward;     // ⋀_P ⋀_{Q≥P} ([P] → [Q])
  ElementSet meets;      // ⋀_{S commuting} (⋀_{P∈S}[P] → [⋀S])
  ElementSet decides;    // ⋀_P ([P] ∨ [∁P])
  std::size_t commuting_subsets = 0;
};

/// Evaluates the three sentences in Reg of the condition poset, under G(P) ↦ [P].
inline TRValues tR_validities(const AbstractPS& R, const ConditionPoset& CP, const PsysCaps& caps = {}) {
  const auto reg = regular_algebra(CP.poset);
  const auto& A = reg.algebra;
  std::vector<ElementSet> br;
  for (std::size_t P = 0; P < R.size(); ++P) br.push_back(reg.from_poset_set(bracket(R, CP, P)));
  TRValues v{A.one(), A.one(), A.one(), 0};
  for (std::size_t P = 0; P < R.size(); ++P) {
    R.up(P).for_each([&](std::size_t Q) { v.upward = A.meet(v.upward, A.implies(br[P], br[Q])); });
    v.decides = A.meet(v.decides, A.join(br[P], br[R.complement(P)]));
  }
  // Depth-first over commuting subsets, carrying the running meets.
  std::vector<std::size_t> chosen;
  auto dfs = [&](auto&& self, std::size_t from, std::size_t prop_meet, const ElementSet& br_meet,
                 const ElementSet& allowed) -> void {
    if (++v.commuting_subsets > caps.commuting_subsets)
      throw CapRefusal("too many commuting subsets", caps.commuting_subsets);
    v.meets = A.meet(v.meets, A.implies(br_meet, br[prop_meet]));
    for (std::size_t Q = allowed.next(from); Q < R.size(); Q = allowed.next(Q + 1))
      self(self, Q + 1, R.meet(prop_meet, Q), A.meet(br_meet, br[Q]), allowed & R.commuting_with(Q));
  };
  dfs(dfs, 0, R.one(), A.one(), ElementSet::full(R.size()));
  return v;
}

inline TRValues tR_validities(const AbstractPS& R, const PsysCaps& caps = {}) {
  return tR_validities(R, condition_poset(R, caps), caps);
}

/// ⟦(⋁_{P∈S} G(P)) ∨ (⋁_{P∈S^⊥} G(P))⟧ = 1 for a boolean subsystem A of a
/// reductive R, S ⊆ A, with S^⊥ taken inside A.
inline bool boolean_subsystem_check(const AbstractPS& R, const ElementSet& A, const ElementSet& S,
                                    const PsysCaps& caps = {}) {
  if (!S.subset_of(A)) throw InputError("S must be a subset of the subsystem");
  if (!A.contains(R.zero()) || !A.contains(R.one())) throw DomainError("A not boolean: missing 0 or 1");
  bool ok = true;
  A.for_each([&](std::size_t p) {
    if (!A.contains(R.complement(p))) ok = false;
    A.for_each([&](std::size_t q) {
      if (!R.commute(p, q) || !A.contains(R.meet(p, q))) ok = false;
    });
  });
  if (!ok) throw DomainError("A not boolean: not a commuting subsystem closed under complement and meet");
  if (!is_reductive(R, caps).reductive) throw DomainError("system is not reductive");
  const auto CP = condition_poset(R, caps);
  const auto reg = regular_algebra(CP.poset);
  ElementSet perpS = R.empty_set();
  A.for_each([&](std::size_t p) {
    bool all = true;
    S.for_each([&](std::size_t q) {
      if (R.meet(p, q) != R.zero()) all = false;
    });
    if (all) perpS.insert(p);
  });
  ElementSet v = reg.algebra.zero();
  (S | perpS).for_each([&](std::size_t p) { v = reg.algebra.join(v, reg.from_poset_set(bracket(R, CP, p))); });
  return v == reg.algebra.one();
}

/// A full, consistent semifilter, found by propagation and backtracking over
/// in/out assignments. nullopt means none exists.
inline std::optional<ElementSet> ultrasemifilter_search(const AbstractPS& R, std::size_t cap = 8192) {
  const std::size_t n = R.size();
  if (n > cap) throw CapRefusal("system too large for ultrasemifilter search", cap);
  enum : signed char { kUnset = -1, kOut = 0, kIn = 1 };
  std::vector<std::vector<std::size_t>> down(n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p)
      if (p != q && R.leq(p, q)) down[q].push_back(p);
  std::vector<std::vector<std::size_t>> comm(n);
  for (std::size_t p = 0; p < n; ++p)
    R.commuting_with(p).for_each([&](std::size_t q) {
      if (q != p) comm[p].push_back(q);
    });

  std::vector<signed char> val(n, kUnset);
  std::vector<std::size_t> trail;
  auto assign = [&](std::size_t p, signed char v, std::vector<std::size_t>& queue) {
    if (val[p] == kUnset) {
      val[p] = v;
      trail.push_back(p);
      queue.push_back(p);
      return true;
    }
    return val[p] == v;
  };
  auto propagate = [&](std::vector<std::size_t>& queue) {
    while (!queue.empty()) {
      const std::size_t p = queue.back();
      queue.pop_back();
      const std::size_t c = R.complement(p);
      if (!assign(c, val[p] == kIn ? kOut : kIn, queue)) return false;
      if (val[p] == kIn) {
        bool ok = true;
        R.up(p).for_each([&](std::size_t q) { ok = ok && assign(q, kIn, queue); });
        if (!ok) return false;
        for (std::size_t q : comm[p]) {
          const std::size_t m = R.meet(p, q);
          if (val[q] == kIn && !assign(m, kIn, queue)) return false;
          if (val[m] == kOut && !assign(q, kOut, queue)) return false;
        }
      } else {
        for (std::size_t q : down[p])
          if (!assign(q, kOut, queue)) return false;
        // p = a ∧ b out with a in forces b out
        for (std::size_t a = 0; a < n; ++a) {
          if (val[a] != kIn) continue;
          for (std::size_t b : comm[a])
            if (R.meet(a, b) == p && !assign(b, kOut, queue)) return false;
        }
      }
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      val[trail.back()] = kUnset;
      trail.pop_back();
    }
  };
  std::vector<std::size_t> q0;
  if (!assign(R.one(), kIn, q0) || !assign(R.zero(), kOut, q0) || !propagate(q0)) return std::nullopt;
  auto search = [&](auto&& self) -> bool {
    std::size_t p = 0;
    while (p < n && val[p] != kUnset) ++p;
    if (p == n) return true;
    for (signed char v : {kIn, kOut}) {
      const std::size_t mark = trail.size();
      std::vector<std::size_t> queue;
      if (assign(p, v, queue) && propagate(queue) && self(self)) return true;
      undo(mark);
    }
    return false;
  };
  if (!search(search)) return std::nullopt;
  ElementSet F = R.empty_set();
  for (std::size_t p = 0; p < n; ++p)
    if (val[p] == kIn) F.insert(p);
  const auto c = semifilter_closure(R, F);
  if (c.degenerate || !(c.members == F)) throw DomainError("ultrasemifilter search produced an invalid result");
  return F;
}

/// The two-question system {0, P, ∁P, Q, ∁Q, 1} with P, Q noncommuting.
struct MeasureTable {
  std::size_t P = 0, Q = 0;
  /// atom order matches the minimal conditions; joint[i][j] = μ of the
  /// condition containing (i ? ∁P : P) and (j ? ∁Q : Q).
  std::array<std::array<double, 2>, 2> joint{};
  std::array<double, 2> mu_p{};  // μ[P], μ[∁P]
  std::array<double, 2> mu_q{};  // μ[Q], μ[∁Q]
  double max_marginal_error = 0;
};

inline MeasureTable measure_table(const AbstractPS& R, const std::vector<double>& weights) {
  if (R.size() != 6) throw DomainError("measure table needs the six-element two-question system");
  MeasureTable t;
  t.P = R.size();
  for (std::size_t p = 0; p < R.size() && t.P == R.size(); ++p)
    if (p != R.zero() && p != R.one()) t.P = p;
  t.Q = R.size();
  for (std::size_t p = 0; p < R.size() && t.Q == R.size(); ++p)
    if (p != R.zero() && p != R.one() && p != t.P && p != R.complement(t.P)) t.Q = p;
  if (R.commute(t.P, t.Q)) throw DomainError("measure table needs noncommuting P and Q");
  const auto CP = condition_poset(R);
  const auto reg = regular_algebra(CP.poset);
  const std::size_t atoms = reg.algebra.atom_count();
  if (weights.size() != atoms) throw InputError("expected " + std::to_string(atoms) + " atom weights");
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw InputError("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InputError("weights must sum to 1");
  auto mu = [&](const ElementSet& S) {
    const auto x = reg.from_poset_set(bracket(R, CP, S));
    double m = 0;
    x.for_each([&](std::size_t a) { m += weights[a]; });
    return m;
  };
  const std::array<std::size_t, 2> ps{t.P, R.complement(t.P)}, qs{t.Q, R.complement(t.Q)};
  for (int i = 0; i < 2; ++i) {
    t.mu_p[i] = mu(ElementSet(R.size(), {ps[i]}));
    t.mu_q[i] = mu(ElementSet(R.size(), {qs[i]}));
    for (int j = 0; j < 2; ++j) t.joint[i][j] = mu(ElementSet(R.size(), {ps[i], qs[j]}));
  }
  for (int i = 0; i < 2; ++i) {
    t.max_marginal_error = std::max(t.max_marginal_error, std::abs(t.mu_p[i] - t.joint[i][0] - t.joint[i][1]));
    t.max_marginal_error = std::max(t.max_marginal_error, std::abs(t.mu_q[i] - t.joint[0][i] - t.joint[1][i]));
  }
  return t;
}

}  // namespace genlab
