#pragma once

// Finite partial orders: prefilters and filters, density, the perp and
// regular-closure operators, separativity and genericity with respect to a
// finite family of subsets.

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genlab/element_set.hpp"
#include "genlab/error.hpp"

namespace genlab {

using Element = std::size_t;

/// Ordered list of subsets; the order is the enumeration order used by the
/// generic-filter construction.
using DenseFamily = std::vector<ElementSet>;

class FinitePoset {
 public:
  FinitePoset() = default;

  /// Builds a poset from names and `(lesser, greater)` index pairs. The
  /// reflexive closure is applied; antisymmetry and transitivity are checked.
  FinitePoset(std::vector<std::string> names, const std::vector<std::pair<Element, Element>>& leq_pairs)
      : names_(std::move(names)) {
    const std::size_t n = names_.size();
    if (n == 0) throw InputError("poset must be nonempty");
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!index_.emplace(names_[i], i).second) throw InputError("duplicate element '" + names_[i] + "'");
    down_.assign(n, ElementSet(n));
    up_.assign(n, ElementSet(n));
    for (Element i = 0; i < n; ++i) {
      down_[i].insert(i);
      up_[i].insert(i);
    }
    for (auto [a, b] : leq_pairs) {
      if (a >= n || b >= n) throw InputError("order pair references unknown element");
      down_[b].insert(a);
      up_[a].insert(b);
    }
    for (Element a = 0; a < n; ++a)
      for (Element b = a + 1; b < n; ++b)
        if (down_[b].contains(a) && down_[a].contains(b))
          throw InputError("order is not antisymmetric at <" + names_[a] + "," + names_[b] + ">");
    // transitivity: everything below a member of down(b) is in down(b)
    for (Element b = 0; b < n; ++b)
      down_[b].for_each([&](Element a) {
        if (!down_[a].subset_of(down_[b]))
          throw InputError("order is not transitive below '" + names_[b] + "' via '" + names_[a] + "'");
      });
    compat_.assign(n, ElementSet(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (down_[a].intersects(down_[b])) compat_[a].insert(b);
  }

  /// Builds a poset from a generating relation, taking its reflexive-transitive closure.
  static FinitePoset from_covers(std::vector<std::string> names, const std::vector<std::pair<Element, Element>>& covers) {
    const std::size_t n = names.size();
    std::vector<ElementSet> below(n, ElementSet(n));
    for (Element i = 0; i < n; ++i) below[i].insert(i);
    for (auto [a, b] : covers) {
      if (a >= n || b >= n) throw InputError("order pair references unknown element");
      below[b].insert(a);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (Element b = 0; b < n; ++b) {
        ElementSet acc = below[b];
        below[b].for_each([&](Element a) { acc |= below[a]; });
        if (!(acc == below[b])) {
          below[b] = acc;
          changed = true;
        }
      }
    }
    std::vector<std::pair<Element, Element>> pairs;
    for (Element b = 0; b < n; ++b) below[b].for_each([&](Element a) { pairs.emplace_back(a, b); });
    return FinitePoset(std::move(names), pairs);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Element e) const { return names_.at(e); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  Element index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown element '" + name + "'");
    return it->second;
  }

  ElementSet empty_set() const { return ElementSet(size()); }
  ElementSet all() const { return ElementSet::full(size()); }

  bool leq(Element p, Element q) const { return down_.at(q).contains(check(p)); }

  /// ⌈p⌉: everything below p.
  const ElementSet& down(Element p) const { return down_.at(p); }
  /// ⌊p⌋: everything above p.
  const ElementSet& up(Element p) const { return up_.at(p); }
  /// Elements compatible with p.
  const ElementSet& compatible_with(Element p) const { return compat_.at(p); }

  ElementSet down_closure(const ElementSet& x) const {
    ElementSet r(size());
    x.for_each([&](Element p) { r |= down_[p]; });
    return r;
  }
  ElementSet up_closure(const ElementSet& x) const {
    ElementSet r(size());
    x.for_each([&](Element p) { r |= up_[p]; });
    return r;
  }

  ElementSet minimal_elements() const {
    ElementSet r(size());
    for (Element p = 0; p < size(); ++p)
      if (down_[p].count() == 1) r.insert(p);
    return r;
  }

  /// The maximum element, or size() when there is none.
  Element top() const {
    for (Element p = 0; p < size(); ++p)
      if (up_[p].count() == 1 && down_[p].count() == size()) return p;
    return size();
  }

  Element check(Element p) const {
    if (p >= size()) throw InputError("unknown element id " + std::to_string(p));
    return p;
  }

  ElementSet set_of(const std::vector<std::string>& names) const {
    ElementSet s(size());
    for (const auto& nm : names) s.insert(index(nm));
    return s;
  }

  std::string format(const ElementSet& s) const {
    std::string out = "{";
    bool first = true;
    s.for_each([&](Element e) {
      if (!first) out += ",";
      out += names_[e];
      first = false;
    });
    return out + "}";
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Element> index_;
  std::vector<ElementSet> down_;
  std::vector<ElementSet> up_;
  std::vector<ElementSet> compat_;
};

inline bool compatible(const FinitePoset& P, Element p, Element q) {
  return P.compatible_with(P.check(p)).contains(P.check(q));
}

/// X^⊥: elements incompatible with every member of X.
inline ElementSet perp(const FinitePoset& P, const ElementSet& X) {
  ElementSet r(P.size());
  for (Element p = 0; p < P.size(); ++p)
    if (!P.compatible_with(p).intersects(X)) r.insert(p);
  return r;
}

inline ElementSet regular_closure(const FinitePoset& P, const ElementSet& X) { return perp(P, perp(P, X)); }

inline bool is_regular(const FinitePoset& P, const ElementSet& X) { return regular_closure(P, X) == X; }

/// Separativity as "every principal downset is regular".
inline bool is_separative_by_downsets(const FinitePoset& P) {
  for (Element p = 0; p < P.size(); ++p)
    if (!is_regular(P, P.down(p))) return false;
  return true;
}

/// Separativity as "p ≰ q implies some r ≤ p incompatible with q".
inline bool is_separative_by_separation(const FinitePoset& P) {
  for (Element p = 0; p < P.size(); ++p)
    for (Element q = 0; q < P.size(); ++q) {
      if (P.leq(p, q)) continue;
      if (P.down(p).subset_of(P.compatible_with(q))) return false;
    }
  return true;
}

/// Both criteria are evaluated; disagreement would mean a broken order and is
/// reported as a DomainError.
inline bool is_separative(const FinitePoset& P) {
  const bool a = is_separative_by_downsets(P);
  const bool b = is_separative_by_separation(P);
  if (a != b) throw DomainError("separativity criteria disagree");
  return a;
}

inline bool is_dense(const FinitePoset& P, const ElementSet& X) {
  for (Element p = 0; p < P.size(); ++p)
    if (!P.down(p).intersects(X)) return false;
  return true;
}

/// S' = { p : p ≤ some q ∈ S, or p incompatible with all of S }. Always dense.
inline ElementSet derived_dense_set(const FinitePoset& P, const ElementSet& S) {
  return P.down_closure(S) | perp(P, S);
}

/// Directed and nonempty: any two members have a common extension inside D.
inline bool is_prefilter(const FinitePoset& P, const ElementSet& D) {
  if (D.empty()) return false;
  const auto m = D.members();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (!(P.down(m[i]) & P.down(m[j])).intersects(D)) return false;
  return true;
}

inline bool is_filter(const FinitePoset& P, const ElementSet& F) {
  return is_prefilter(P, F) && P.up_closure(F) == F;
}

/// A finite prefilter has a least member; ⌊D⌋ = ⌊least⌋.
inline Element least_member(const FinitePoset& P, const ElementSet& D) {
  if (!is_prefilter(P, D)) throw DomainError("not a prefilter");
  Element best = D.first();
  D.for_each([&](Element p) {
    if (P.leq(p, best)) best = p;
  });
  return best;
}

/// Genericity: every S in the family contains a member of D or has a member
/// of D incompatible with all of S.
inline bool is_generic(const FinitePoset& P, const ElementSet& D, const DenseFamily& family) {
  if (!is_prefilter(P, D)) throw DomainError("not a prefilter");
  for (const auto& S : family) {
    if (D.intersects(S)) continue;
    if (D.intersects(perp(P, S))) continue;
    return false;
  }
  return true;
}

/// Greedy extension over the canonical element order: start from the least
/// member of D and move to each later element lying below the current one.
inline ElementSet extend_to_maximal_filter(const FinitePoset& P, const ElementSet& D) {
  Element m = least_member(P, D);
  for (Element e = 0; e < P.size(); ++e)
    if (e != m && P.leq(e, m)) m = e;
  return P.up(m);
}

}  // namespace genlab
