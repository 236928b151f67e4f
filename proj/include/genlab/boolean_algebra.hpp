#pragma once

// Finite boolean algebras in atomic form, the regular algebra Reg P of a
// finite poset, ultrafilters, and the universality homomorphism.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "genlab/element_set.hpp"
#include "genlab/error.hpp"
#include "genlab/poset.hpp"

namespace genlab {

/// A finite boolean algebra, canonically the powerset of its atoms. Elements
/// are atom sets; meet is intersection, join is union.
class FiniteBooleanAlgebra {
 public:
  using Elem = ElementSet;
  static constexpr std::size_t kMaxEnumerableAtoms = 20;

  explicit FiniteBooleanAlgebra(std::size_t atoms) : atoms_(atoms) {
    if (atoms == 0) throw InputError("boolean algebra needs at least one atom");
  }

  std::size_t atom_count() const noexcept { return atoms_; }

  Elem zero() const { return Elem(atoms_); }
  Elem one() const { return Elem::full(atoms_); }
  Elem atom(std::size_t i) const {
    if (i >= atoms_) throw InputError("atom index out of range");
    return Elem(atoms_, {i});
  }
  Elem meet(const Elem& a, const Elem& b) const { return a & b; }
  Elem join(const Elem& a, const Elem& b) const { return a | b; }
  Elem complement(const Elem& a) const { return a.complement(); }
  Elem minus(const Elem& a, const Elem& b) const { return a - b; }
  Elem implies(const Elem& a, const Elem& b) const { return join(complement(a), b); }
  Elem iff(const Elem& a, const Elem& b) const { return meet(implies(a, b), implies(b, a)); }
  bool leq(const Elem& a, const Elem& b) const { return a.subset_of(b); }

  /// Element whose atoms are the set bits of `index`.
  Elem element(std::uint64_t index) const { return Elem::from_mask(atoms_, index); }
  static std::uint64_t index_of(const Elem& e) { return e.mask(); }

  std::size_t element_count() const {
    require_enumerable();
    return std::size_t{1} << atoms_;
  }

  std::vector<Elem> elements() const {
    require_enumerable();
    std::vector<Elem> out;
    out.reserve(element_count());
    for (std::uint64_t m = 0; m < element_count(); ++m) out.push_back(element(m));
    return out;
  }

  void require_enumerable() const {
    if (atoms_ > kMaxEnumerableAtoms) throw CapRefusal("boolean algebra too large to enumerate", kMaxEnumerableAtoms);
  }

  std::string format(const Elem& e) const {
    std::string out = "[";
    bool first = true;
    e.for_each([&](std::size_t a) {
      if (!first) out += ",";
      out += std::to_string(a);
      first = false;
    });
    return out + "]";
  }

 private:
  std::size_t atoms_;
};

struct AxiomReport {
  bool ok = true;
  std::string witness;
};

/// Checks every identity of the boolean algebra axioms over all elements,
/// pairs and triples. Works with any type exposing elements(), zero(), one(),
/// meet(), join() and complement(), so alternative operation tables can be
/// audited the same way.
template <class Algebra>
AxiomReport verify_axioms(const Algebra& A) {
  const auto els = A.elements();
  auto fmt = [&](const auto& x) { return A.format(x); };
  auto fail = [](std::string w) { return AxiomReport{false, std::move(w)}; };
  if (A.zero() == A.one()) return fail("0 = 1");
  for (const auto& p : els) {
    if (!(A.join(p, p) == p)) return fail("join idempotence fails at " + fmt(p));
    if (!(A.meet(p, p) == p)) return fail("meet idempotence fails at " + fmt(p));
    const auto c = A.complement(p);
    if (!(A.join(p, c) == A.one()) || !(A.meet(p, c) == A.zero())) return fail("complement law fails at " + fmt(p));
    for (const auto& q : els)
      if (!(q == c) && A.join(p, q) == A.one() && A.meet(p, q) == A.zero())
        return fail("complement of " + fmt(p) + " is not unique: " + fmt(q));
  }
  for (const auto& p : els)
    for (const auto& q : els) {
      if (!(A.join(p, q) == A.join(q, p))) return fail("join commutativity fails at " + fmt(p) + "," + fmt(q));
      if (!(A.meet(p, q) == A.meet(q, p))) return fail("meet commutativity fails at " + fmt(p) + "," + fmt(q));
      if (!(A.complement(A.join(p, q)) == A.meet(A.complement(p), A.complement(q))))
        return fail("De Morgan (join) fails at " + fmt(p) + "," + fmt(q));
      if (!(A.complement(A.meet(p, q)) == A.join(A.complement(p), A.complement(q))))
        return fail("De Morgan (meet) fails at " + fmt(p) + "," + fmt(q));
      for (const auto& r : els) {
        const std::string at = fmt(p) + "," + fmt(q) + "," + fmt(r);
        if (!(A.join(p, A.join(q, r)) == A.join(A.join(p, q), r))) return fail("join associativity fails at " + at);
        if (!(A.meet(p, A.meet(q, r)) == A.meet(A.meet(p, q), r))) return fail("meet associativity fails at " + at);
        if (!(A.meet(A.join(p, q), r) == A.join(A.meet(p, r), A.meet(q, r))))
          return fail("meet distributivity fails at " + at);
        if (!(A.join(A.meet(p, q), r) == A.meet(A.join(p, r), A.join(q, r))))
          return fail("join distributivity fails at " + at);
      }
    }
  return {};
}

/// Reg P in atomic form. Atoms are the minimal elements of P (in canonical
/// order); a regular set X corresponds to the minimal elements it contains.
struct RegularAlgebraResult {
  FiniteBooleanAlgebra algebra;
  /// Poset element of each atom.
  std::vector<Element> atom_elements;
  /// p ↦ regular closure of ⌈p⌉, as an algebra element.
  std::vector<ElementSet> embed;

  std::size_t poset_size() const { return embed.size(); }

  /// The regular subset of P represented by an algebra element.
  ElementSet to_poset_set(const ElementSet& x) const {
    ElementSet r(poset_size());
    for (Element p = 0; p < poset_size(); ++p)
      if (embed[p].subset_of(x)) r.insert(p);
    return r;
  }

  /// The algebra element of a regular subset of P (its minimal elements).
  ElementSet from_poset_set(const ElementSet& X) const {
    ElementSet r(algebra.atom_count());
    for (std::size_t a = 0; a < atom_elements.size(); ++a)
      if (X.contains(atom_elements[a])) r.insert(a);
    return r;
  }
};

inline RegularAlgebraResult regular_algebra(const FinitePoset& P) {
  const ElementSet mins = P.minimal_elements();
  std::vector<Element> atoms = mins.members();
  std::vector<std::size_t> atom_of(P.size(), P.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) atom_of[atoms[a]] = a;
  std::vector<ElementSet> embed;
  embed.reserve(P.size());
  for (Element p = 0; p < P.size(); ++p) {
    ElementSet e(atoms.size());
    (P.down(p) & mins).for_each([&](Element m) { e.insert(atom_of[m]); });
    embed.push_back(std::move(e));
  }
  return RegularAlgebraResult{FiniteBooleanAlgebra(atoms.size()), std::move(atoms), std::move(embed)};
}

/// The principal ultrafilter at an atom: { P : atom ∈ P }.
struct Ultrafilter {
  std::size_t atom;
  bool contains(const ElementSet& x) const { return x.contains(atom); }
  friend bool operator==(const Ultrafilter&, const Ultrafilter&) = default;
};

inline std::vector<Ultrafilter> ultrafilters(const FiniteBooleanAlgebra& A) {
  std::vector<Ultrafilter> out;
  for (std::size_t a = 0; a < A.atom_count(); ++a) out.push_back({a});
  return out;
}

/// The unique P with (∀F) P ∈ F ⟺ F ∈ C, taking the hidden-state set to be
/// all ultrafilters. Returns nullopt if the candidate fails the defining
/// property (which cannot happen in a finite algebra).
inline std::optional<ElementSet> question_boolean_value(const FiniteBooleanAlgebra& A, const std::vector<Ultrafilter>& C) {
  ElementSet v = A.zero();
  for (const auto& F : C) {
    if (F.atom >= A.atom_count()) throw InputError("ultrafilter atom out of range");
    v.insert(F.atom);
  }
  for (const auto& F : ultrafilters(A)) {
    const bool in_c = std::find(C.begin(), C.end(), F) != C.end();
    if (F.contains(v) != in_c) return std::nullopt;
  }
  return v;
}

/// Values of the three sentences saying G is a generic filter: upward
/// closure, directedness, and the X ∪ X^⊥ decision over every subset X.
struct FilterSentenceValues {
  ElementSet upward;
  ElementSet directed;
  ElementSet decides;
};

inline constexpr std::size_t kMaxFilterSentencePoset = 20;

inline FilterSentenceValues filter_sentence_values(const FinitePoset& P, const FiniteBooleanAlgebra& A,
                                                   const std::vector<ElementSet>& iota) {
  if (iota.size() != P.size()) throw InputError("interpretation must assign every poset element");
  if (P.size() > kMaxFilterSentencePoset)
    throw CapRefusal("decision sentence ranges over all subsets of the poset", kMaxFilterSentencePoset);
  const std::size_t n = P.size();
  FilterSentenceValues v{A.one(), A.one(), A.one()};
  for (Element p = 0; p < n; ++p)
    P.up(p).for_each([&](Element q) { v.upward = A.meet(v.upward, A.implies(iota[p], iota[q])); });
  for (Element p = 0; p < n; ++p)
    for (Element q = 0; q < n; ++q) {
      ElementSet common = A.zero();
      (P.down(p) & P.down(q)).for_each([&](Element r) { common = A.join(common, iota[r]); });
      v.directed = A.meet(v.directed, A.implies(A.meet(iota[p], iota[q]), common));
    }
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const ElementSet X = ElementSet::from_mask(n, m);
    ElementSet d = A.zero();
    (X | perp(P, X)).for_each([&](Element q) { d = A.join(d, iota[q]); });
    v.decides = A.meet(v.decides, d);
  }
  return v;
}

/// Under the canonical interpretation p ↦ regular closure of ⌈p⌉ in Reg P.
inline FilterSentenceValues filter_sentence_values(const FinitePoset& P) {
  const auto reg = regular_algebra(P);
  return filter_sentence_values(P, reg.algebra, reg.embed);
}

/// h(X) = ⋁_{p ∈ X} ι(p) on Reg P, tabulated by Reg-element index.
class UniversalHom {
 public:
  UniversalHom(RegularAlgebraResult reg, FiniteBooleanAlgebra target, std::vector<ElementSet> table)
      : reg_(std::move(reg)), target_(std::move(target)), table_(std::move(table)) {}

  const RegularAlgebraResult& source() const { return reg_; }
  const FiniteBooleanAlgebra& target() const { return target_; }
  const ElementSet& operator()(const ElementSet& x) const { return table_.at(FiniteBooleanAlgebra::index_of(x)); }

  /// Exhaustive check that h preserves complement, binary joins and meets,
  /// 0 and 1. Returns an empty string on success, else a description.
  std::string verify() const {
    const auto& S = reg_.algebra;
    const auto& T = target_;
    const auto els = S.elements();
    if (!((*this)(S.zero()) == T.zero()) || !((*this)(S.one()) == T.one())) return "h does not preserve 0/1";
    for (const auto& x : els) {
      if (!((*this)(S.complement(x)) == T.complement((*this)(x)))) return "h fails complement at " + S.format(x);
      for (const auto& y : els) {
        if (!((*this)(S.join(x, y)) == T.join((*this)(x), (*this)(y))))
          return "h fails join at " + S.format(x) + "," + S.format(y);
        if (!((*this)(S.meet(x, y)) == T.meet((*this)(x), (*this)(y))))
          return "h fails meet at " + S.format(x) + "," + S.format(y);
      }
    }
    return {};
  }

 private:
  RegularAlgebraResult reg_;
  FiniteBooleanAlgebra target_;
  std::vector<ElementSet> table_;
};

/// Builds the complete homomorphism Reg P → A induced by ι, refusing when any
/// of the three filter sentences fails to evaluate to 1 under ι.
inline UniversalHom universality_hom(const FinitePoset& P, const FiniteBooleanAlgebra& A, const std::vector<ElementSet>& iota) {
  const auto v = filter_sentence_values(P, A, iota);
  if (!(v.upward == A.one())) throw DomainError("refused: upward-closure sentence is not valid under the interpretation");
  if (!(v.directed == A.one())) throw DomainError("refused: directedness sentence is not valid under the interpretation");
  if (!(v.decides == A.one())) throw DomainError("refused: decision sentence is not valid under the interpretation");
  auto reg = regular_algebra(P);
  std::vector<ElementSet> table;
  table.reserve(reg.algebra.element_count());
  for (const auto& x : reg.algebra.elements()) {
    ElementSet h = A.zero();
    reg.to_poset_set(x).for_each([&](Element p) { h = A.join(h, iota[p]); });
    table.push_back(std::move(h));
  }
  return UniversalHom(std::move(reg), A, std::move(table));
}

}  // namespace genlab
