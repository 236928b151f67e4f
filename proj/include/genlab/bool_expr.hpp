#pragma once

// Boolean expressions over indexed primitives: canonical immutable trees,
// rank, subexpressions, valuation in any boolean algebra, the π/δ genericity
// equivalence for finite propositional algebras, and a small text grammar.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "genlab/boolean_algebra.hpp"
#include "genlab/element_set.hpp"
#include "genlab/error.hpp"

namespace genlab {

class BoolExpr {
 public:
  enum class Kind { Prim = 0, Compl = 1, Join = 2, Meet = 3 };

  static BoolExpr prim(std::size_t i) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prim;
    n->index = i;
    n->hash = std::hash<std::size_t>{}(i) * 0x9e3779b97f4a7c15ULL;
    return BoolExpr(std::move(n));
  }
  static BoolExpr compl_(BoolExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compl;
    n->rank = e.rank() + 1;
    n->hash = mix(0x51ed27, e.hash());
    n->kids.push_back(std::move(e));
    return BoolExpr(std::move(n));
  }
  static BoolExpr join(std::vector<BoolExpr> kids) { return nary(Kind::Join, std::move(kids)); }
  static BoolExpr meet(std::vector<BoolExpr> kids) { return nary(Kind::Meet, std::move(kids)); }

  Kind kind() const { return node_->kind; }
  /// Primitive index; only meaningful for Kind::Prim.
  std::size_t index() const { return node_->index; }
  const std::vector<BoolExpr>& children() const { return node_->kids; }
  std::size_t rank() const { return node_->rank; }
  std::size_t hash() const { return node_->hash; }

  /// Structural total order: kind, then index or children lexicographically.
  static int compare(const BoolExpr& a, const BoolExpr& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.kind() == Kind::Prim) return a.index() == b.index() ? 0 : (a.index() < b.index() ? -1 : 1);
    const auto& x = a.children();
    const auto& y = b.children();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
      if (int c = compare(x[i], y[i])) return c;
    return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
  }
  friend bool operator==(const BoolExpr& a, const BoolExpr& b) { return a.hash() == b.hash() && compare(a, b) == 0; }
  friend bool operator<(const BoolExpr& a, const BoolExpr& b) { return compare(a, b) < 0; }

  /// Largest primitive index + 1 (0 if there are none).
  std::size_t arity() const {
    if (kind() == Kind::Prim) return index() + 1;
    std::size_t r = 0;
    for (const auto& k : children()) r = std::max(r, k.arity());
    return r;
  }

 private:
  struct Node {
    Kind kind = Kind::Prim;
    std::size_t index = 0;
    std::vector<BoolExpr> kids;
    std::size_t rank = 0;
    std::size_t hash = 0;
  };

  explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

  static BoolExpr nary(Kind k, std::vector<BoolExpr> kids) {
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->hash = k == Kind::Join ? 0x10aa : 0x20bb;
    for (const auto& c : kids) {
      n->rank = std::max(n->rank, c.rank() + 1);
      n->hash = mix(n->hash, c.hash());
    }
    n->hash = mix(n->hash, kids.size());
    n->kids = std::move(kids);
    return BoolExpr(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

struct BoolExprHash {
  std::size_t operator()(const BoolExpr& e) const { return e.hash(); }
};

/// Ê: the expression together with all of its descendants, sorted and unique.
inline std::vector<BoolExpr> subexpressions(const BoolExpr& e) {
  std::set<BoolExpr> seen;
  std::vector<BoolExpr> stack{e};
  while (!stack.empty()) {
    BoolExpr x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    for (const auto& c : x.children()) stack.push_back(c);
  }
  return {seen.begin(), seen.end()};
}

/// Join/meet nodes hold finite child lists, so every tree is Borel. The
/// equivalent form is checked too: Ê is a finite set closed under children.
inline bool is_borel(const BoolExpr& e) {
  const auto sub = subexpressions(e);
  for (const auto& s : sub)
    for (const auto& c : s.children())
      if (!std::binary_search(sub.begin(), sub.end(), c)) return false;
  return std::binary_search(sub.begin(), sub.end(), e);
}

/// An assignment of algebra elements to primitive indices.
template <class Algebra>
struct Interpretation {
  const Algebra* algebra;
  std::vector<typename Algebra::Elem> assignment;
};

template <class Algebra>
typename Algebra::Elem evaluate(const BoolExpr& e, const Algebra& A, const std::vector<typename Algebra::Elem>& iota) {
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::Prim:
      if (e.index() >= iota.size()) throw InputError("unassigned primitive index " + std::to_string(e.index()));
      return iota[e.index()];
    case K::Compl:
      return A.complement(evaluate(e.children()[0], A, iota));
    case K::Join: {
      auto r = A.zero();
      for (const auto& c : e.children()) r = A.join(r, evaluate(c, A, iota));
      return r;
    }
    case K::Meet: {
      auto r = A.one();
      for (const auto& c : e.children()) r = A.meet(r, evaluate(c, A, iota));
      return r;
    }
  }
  throw DomainError("corrupt expression node");
}

template <class Algebra>
typename Algebra::Elem evaluate(const BoolExpr& e, const Interpretation<Algebra>& I) {
  return evaluate(e, *I.algebra, I.assignment);
}

// ---------------------------------------------------------------------------
// Text form:  expr := "e" digits | "!(" expr ")" | "V[" list "]" | "A[" list "]"
// An empty list is accepted for the empty join (0) and the empty meet (1).

inline std::string print(const BoolExpr& e) {
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::Prim:
      return "e" + std::to_string(e.index());
    case K::Compl:
      return "!(" + print(e.children()[0]) + ")";
    case K::Join:
    case K::Meet: {
      std::string s = e.kind() == K::Join ? "V[" : "A[";
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += ", ";
        s += print(e.children()[i]);
      }
      return s + "]";
    }
  }
  return {};
}

namespace detail {
class ExprParser {
 public:
  explicit ExprParser(std::string_view t) : t_(t) {}

  BoolExpr parse_all() {
    BoolExpr e = expr();
    skip();
    if (pos_ != t_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("syntax error at position " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= t_.size() || t_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  BoolExpr expr() {
    skip();
    if (pos_ >= t_.size()) fail("unexpected end of input");
    const char c = t_[pos_];
    if (c == 'e') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected digits after 'e'");
      if (pos_ - start > 9) fail("primitive index too large");
      return BoolExpr::prim(std::stoul(std::string(t_.substr(start, pos_ - start))));
    }
    if (c == '!') {
      ++pos_;
      expect('(');
      BoolExpr inner = expr();
      expect(')');
      return BoolExpr::compl_(std::move(inner));
    }
    if (c == 'V' || c == 'A') {
      ++pos_;
      expect('[');
      std::vector<BoolExpr> kids;
      skip();
      if (pos_ < t_.size() && t_[pos_] == ']') {
        ++pos_;
      } else {
        kids.push_back(expr());
        for (skip(); pos_ < t_.size() && t_[pos_] == ','; skip()) {
          ++pos_;
          kids.push_back(expr());
        }
        expect(']');
      }
      return c == 'V' ? BoolExpr::join(std::move(kids)) : BoolExpr::meet(std::move(kids));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};
}  // namespace detail

inline BoolExpr parse_expr(std::string_view text) { return detail::ExprParser(text).parse_all(); }

/// Random expression over `nprims` primitives with depth at most `depth`
/// and join/meet widths in [0, max_width].
template <class Rng>
BoolExpr random_expr(Rng& rng, std::size_t nprims, std::size_t depth, std::size_t max_width) {
  std::uniform_int_distribution<int> kind(0, depth == 0 ? 0 : 3);
  switch (kind(rng)) {
    case 0:
      return BoolExpr::prim(std::uniform_int_distribution<std::size_t>(0, nprims - 1)(rng));
    case 1:
      return BoolExpr::compl_(random_expr(rng, nprims, depth - 1, max_width));
    default: {
      const bool is_join = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
      const std::size_t w = std::uniform_int_distribution<std::size_t>(0, max_width)(rng);
      std::vector<BoolExpr> kids;
      for (std::size_t i = 0; i < w; ++i) kids.push_back(random_expr(rng, nprims, depth - 1, max_width));
      return is_join ? BoolExpr::join(std::move(kids)) : BoolExpr::meet(std::move(kids));
    }
  }
}

// ---------------------------------------------------------------------------
// π/δ equivalence on a finite propositional algebra. Propositions are algebra
// elements; prefilters live in the nonzero part, where two propositions are
// incompatible iff their meet is 0. A set of propositions is stored as an
// ElementSet over element indices (universe 2^atoms).

inline constexpr std::size_t kMaxPrefilterAtoms = 6;

inline std::size_t proposition_universe(const FiniteBooleanAlgebra& A) {
  if (A.atom_count() > kMaxPrefilterAtoms) throw CapRefusal("propositional prefilter enumeration", kMaxPrefilterAtoms);
  return std::size_t{1} << A.atom_count();
}

/// Every nonempty directed subset of the nonzero propositions. A finite one
/// has a least member m, and any set of elements above m may join it.
inline std::vector<ElementSet> propositional_prefilters(const FiniteBooleanAlgebra& A) {
  const std::size_t U = proposition_universe(A);
  std::vector<ElementSet> out;
  for (std::uint64_t m = 1; m < U; ++m) {
    std::vector<std::uint64_t> above;
    for (std::uint64_t x = 1; x < U; ++x)
      if (x != m && (x & m) == m) above.push_back(x);
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << above.size()); ++pick) {
      ElementSet D(U, {static_cast<std::size_t>(m)});
      for (std::size_t i = 0; i < above.size(); ++i)
        if ((pick >> i) & 1U) D.insert(above[i]);
      out.push_back(std::move(D));
    }
  }
  return out;
}

/// Directedness checked from the definition (common extension inside D, nonzero).
inline bool is_propositional_prefilter(const FiniteBooleanAlgebra& A, const ElementSet& D) {
  if (D.empty() || D.contains(0) || D.universe() != proposition_universe(A)) return false;
  const auto m = D.members();
  for (auto x : m)
    for (auto y : m) {
      bool ok = false;
      for (auto z : m)
        if ((z & x) == z && (z & y) == z) ok = true;
      if (!ok) return false;
    }
  return true;
}

/// D meets S, or some member of D is incompatible with every member of S.
inline bool is_set_generic(const ElementSet& D, const ElementSet& S) {
  if (D.intersects(S)) return true;
  bool found = false;
  D.for_each([&](std::size_t q) {
    if (found) return;
    bool all = true;
    S.for_each([&](std::size_t s) {
      if ((q & s) != 0) all = false;
    });
    if (all) found = true;
  });
  return found;
}

/// The family 𝒮 for E under π, each set over element indices, sorted and unique.
inline std::vector<ElementSet> genericity_requirement_sets(const BoolExpr& E, const FiniteBooleanAlgebra& A,
                                                          const std::vector<ElementSet>& pi) {
  const std::size_t U = proposition_universe(A);
  std::set<ElementSet> fam;
  for (const auto& sub : subexpressions(E)) {
    fam.insert(ElementSet(U, {static_cast<std::size_t>(evaluate(sub, A, pi).mask())}));
    if (sub.kind() == BoolExpr::Kind::Join || sub.kind() == BoolExpr::Kind::Meet) {
      ElementSet S(U);
      for (const auto& c : sub.children()) {
        auto v = evaluate(c, A, pi);
        if (sub.kind() == BoolExpr::Kind::Meet) v = A.complement(v);
        S.insert(v.mask());
      }
      fam.insert(std::move(S));
    }
  }
  return {fam.begin(), fam.end()};
}

/// D ∈ ⟦E⟧^δ by structural recursion on membership.
inline bool delta_member(const BoolExpr& E, const FiniteBooleanAlgebra& A, const std::vector<ElementSet>& pi,
                         const ElementSet& D) {
  using K = BoolExpr::Kind;
  switch (E.kind()) {
    case K::Prim:
      if (E.index() >= pi.size()) throw InputError("unassigned primitive index " + std::to_string(E.index()));
      return D.contains(pi[E.index()].mask());
    case K::Compl:
      return !delta_member(E.children()[0], A, pi, D);
    case K::Join:
      return std::any_of(E.children().begin(), E.children().end(),
                         [&](const BoolExpr& c) { return delta_member(c, A, pi, D); });
    case K::Meet:
      return std::all_of(E.children().begin(), E.children().end(),
                         [&](const BoolExpr& c) { return delta_member(c, A, pi, D); });
  }
  return false;
}

struct PiDeltaResult {
  bool generic = false;
  bool delta = false;
  bool pi_in_d = false;
  bool agree() const { return delta == pi_in_d; }
};

inline PiDeltaResult pi_delta_equivalence_check(const BoolExpr& E, const FiniteBooleanAlgebra& A,
                                                const std::vector<ElementSet>& pi, const ElementSet& D) {
  if (!is_propositional_prefilter(A, D)) throw DomainError("not a prefilter");
  PiDeltaResult r;
  r.generic = true;
  for (const auto& S : genericity_requirement_sets(E, A, pi))
    if (!is_set_generic(D, S)) r.generic = false;
  r.delta = delta_member(E, A, pi, D);
  r.pi_in_d = D.contains(evaluate(E, A, pi).mask());
  return r;
}

/// Checks ⟦σ⟧^ι = h(⟦σ⟧^{ι_P}) for each corpus sentence, primitives read as
/// G(p) for poset element p. Returns the index of the first mismatch, or
/// corpus.size() when all agree.
inline std::size_t universality_corpus_check(const UniversalHom& h, const std::vector<ElementSet>& iota,
                                             const std::vector<BoolExpr>& corpus) {
  const auto& reg = h.source();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto direct = evaluate(corpus[i], h.target(), iota);
    const auto via = h(evaluate(corpus[i], reg.algebra, reg.embed));
    if (!(direct == via)) return i;
  }
  return corpus.size();
}

}  // namespace genlab
