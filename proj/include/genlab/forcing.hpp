#pragma once

// Forcing over finite fragments: hereditarily finite sets, transitive
// collapse, names labelled by poset elements, x^G, boolean values of
// sentences in Reg P and the truth-lemma check over principal generics.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genlab/boolean_algebra.hpp"
#include "genlab/element_set.hpp"
#include "genlab/error.hpp"
#include "genlab/poset.hpp"

namespace genlab {

namespace detail {
inline std::size_t mix_hash(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }
}  // namespace detail

/// Canonical hereditarily finite set: members sorted and unique.
class HFSet {
 public:
  HFSet() : node_(empty_node()) {}

  static HFSet make(std::vector<HFSet> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    auto n = std::make_shared<Node>();
    n->hash = 0x3c6ef372;
    for (const auto& m : members) {
      n->rank = std::max(n->rank, m.rank() + 1);
      n->hash = detail::mix_hash(n->hash, m.hash());
    }
    n->hash = detail::mix_hash(n->hash, members.size());
    n->members = std::move(members);
    return HFSet(std::move(n));
  }
  /// von Neumann ordinal n = {0, ..., n−1}.
  static HFSet ordinal(std::size_t n) {
    std::vector<HFSet> m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(ordinal_cache(i));
    return make(std::move(m));
  }

  const std::vector<HFSet>& members() const { return node_->members; }
  std::size_t size() const { return node_->members.size(); }
  bool empty() const { return node_->members.empty(); }
  /// 0 for ∅, otherwise 1 + the largest member rank.
  std::size_t rank() const { return node_->rank; }
  std::size_t hash() const { return node_->hash; }
  bool contains(const HFSet& x) const { return std::binary_search(members().begin(), members().end(), x); }

  static int compare(const HFSet& a, const HFSet& b) {
    if (a.node_ == b.node_) return 0;
    if (a.rank() != b.rank()) return a.rank() < b.rank() ? -1 : 1;
    const auto& x = a.members();
    const auto& y = b.members();
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (int c = compare(x[i], y[i])) return c;
    return 0;
  }
  friend bool operator==(const HFSet& a, const HFSet& b) { return a.hash() == b.hash() && compare(a, b) == 0; }
  friend bool operator!=(const HFSet& a, const HFSet& b) { return !(a == b); }
  friend bool operator<(const HFSet& a, const HFSet& b) { return compare(a, b) < 0; }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < size(); ++i) s += (i ? "," : "") + members()[i].to_string();
    return s + "}";
  }

 private:
  struct Node {
    std::vector<HFSet> members;
    std::size_t rank = 0;
    std::size_t hash = 0;
  };
  explicit HFSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> empty_node() {
    static const auto e = [] {
      auto n = std::make_shared<Node>();
      n->hash = detail::mix_hash(0x3c6ef372, 0);
      return std::shared_ptr<const Node>(std::move(n));
    }();
    return e;
  }
  static HFSet ordinal_cache(std::size_t i) {
    static std::vector<HFSet> cache{HFSet()};
    while (cache.size() <= i) cache.push_back(make(cache));
    return cache[i];
  }

  std::shared_ptr<const Node> node_;
};

struct HFSetHash {
  std::size_t operator()(const HFSet& s) const { return s.hash(); }
};

/// Parses "{}", "{{},{{}}}" and so on; whitespace is ignored.
inline HFSet parse_hf(std::string_view t) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
  };
  auto fail = [&](const std::string& m) -> HFSet {
    throw InputError("syntax error at position " + std::to_string(pos) + ": " + m);
  };
  std::function<HFSet(std::size_t)> set = [&](std::size_t depth) -> HFSet {
    if (depth > 64) return fail("nesting too deep");
    skip();
    if (pos >= t.size() || t[pos] != '{') return fail("expected '{'");
    ++pos;
    std::vector<HFSet> m;
    skip();
    if (pos < t.size() && t[pos] == '}') {
      ++pos;
      return HFSet();
    }
    for (;;) {
      m.push_back(set(depth + 1));
      skip();
      if (pos < t.size() && t[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < t.size() && t[pos] == '}') {
        ++pos;
        return HFSet::make(std::move(m));
      }
      return fail("expected ',' or '}'");
    }
  };
  HFSet r = set(0);
  skip();
  if (pos != t.size()) fail("trailing input");
  return r;
}

/// Every HF set of rank < bound (that is, V_bound), sorted canonically.
inline std::vector<HFSet> hf_universe(std::size_t bound) {
  if (bound > 5) throw CapRefusal("HF universe rank bound", 5);
  std::vector<HFSet> v;  // V_0 = ∅
  for (std::size_t k = 0; k < bound; ++k) {
    std::vector<HFSet> next;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << v.size()); ++m) {
      std::vector<HFSet> mem;
      for (std::size_t i = 0; i < v.size(); ++i)
        if ((m >> i) & 1U) mem.push_back(v[i]);
      next.push_back(HFSet::make(std::move(mem)));
    }
    std::sort(next.begin(), next.end());
    v = std::move(next);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Transitive collapse of (X, E). Nodes are 0..n−1 and pre[y] is the bitmask
// of x with x E y.

enum class CollapseStatus { Ok, NotWellFounded, NotExtensional };

struct CollapseCheck {
  CollapseStatus status = CollapseStatus::Ok;
  std::size_t n = 0, m = 0;  // extensionality witnesses
};

/// Validates without allocating: well-foundedness first, then extensionality.
inline CollapseCheck check_collapse_input(const std::vector<std::uint64_t>& pre) {
  const std::size_t n = pre.size();
  std::uint64_t done = 0;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t y = 0; y < n; ++y)
      if (!((done >> y) & 1U) && (pre[y] & ~done) == 0) {
        done |= std::uint64_t{1} << y;
        progress = true;
      }
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if (done != all) return {CollapseStatus::NotWellFounded, 0, 0};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (pre[a] == pre[b]) return {CollapseStatus::NotExtensional, a, b};
  return {};
}

inline std::vector<HFSet> transitive_collapse_masks(const std::vector<std::uint64_t>& pre) {
  if (pre.size() > 64) throw CapRefusal("collapse node count", 64);
  const auto chk = check_collapse_input(pre);
  if (chk.status == CollapseStatus::NotWellFounded) throw DomainError("not well-founded");
  if (chk.status == CollapseStatus::NotExtensional)
    throw DomainError("extensionality violated at <" + std::to_string(chk.n) + "," + std::to_string(chk.m) + ">");
  const std::size_t n = pre.size();
  std::vector<HFSet> out(n);
  std::uint64_t done = 0;
  while (done != (n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1))
    for (std::size_t y = 0; y < n; ++y) {
      if (((done >> y) & 1U) || (pre[y] & ~done) != 0) continue;
      std::vector<HFSet> mem;
      for (std::size_t x = 0; x < n; ++x)
        if ((pre[y] >> x) & 1U) mem.push_back(out[x]);
      out[y] = HFSet::make(std::move(mem));
      done |= std::uint64_t{1} << y;
    }
  return out;
}

/// E given as pairs (x, y) meaning x E y.
inline std::vector<HFSet> transitive_collapse(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& E) {
  if (nodes > 64) throw CapRefusal("collapse node count", 64);
  std::vector<std::uint64_t> pre(nodes, 0);
  for (auto [x, y] : E) {
    if (x >= nodes || y >= nodes) throw InputError("relation references unknown node");
    pre[y] |= std::uint64_t{1} << x;
  }
  return transitive_collapse_masks(pre);
}

/// The image is transitive and n E m ⟺ j(n) ∈ j(m), with j injective.
inline bool verify_collapse(const std::vector<std::uint64_t>& pre, const std::vector<HFSet>& j) {
  const std::size_t n = pre.size();
  if (j.size() != n) return false;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && j[a] == j[b]) return false;
      if ((((pre[b] >> a) & 1U) != 0) != j[b].contains(j[a])) return false;
    }
  for (const auto& y : j)
    for (const auto& z : y.members())
      if (std::find(j.begin(), j.end(), z) == j.end()) return false;
  return true;
}

// ---------------------------------------------------------------------------

/// A name: a finite set of pairs [child name, poset element].
class PName {
 public:
  using Pair = std::pair<PName, Element>;

  PName() : node_(empty_node()) {}

  static PName make(std::vector<Pair> pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (int c = compare(a.first, b.first)) return c < 0;
      return a.second < b.second;
    });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const Pair& a, const Pair& b) { return a.second == b.second && a.first == b.first; }),
                pairs.end());
    auto n = std::make_shared<Node>();
    n->hash = 0x6a09e667;
    for (const auto& [y, p] : pairs) {
      n->rank = std::max(n->rank, y.rank() + 1);
      n->hash = detail::mix_hash(detail::mix_hash(n->hash, y.hash()), p);
    }
    n->hash = detail::mix_hash(n->hash, pairs.size());
    n->pairs = std::move(pairs);
    return PName(std::move(n));
  }

  const std::vector<Pair>& pairs() const { return node_->pairs; }
  std::size_t rank() const { return node_->rank; }
  std::size_t hash() const { return node_->hash; }
  /// Largest poset element mentioned anywhere, + 1.
  std::size_t element_bound() const {
    std::size_t b = 0;
    for (const auto& [y, p] : pairs()) b = std::max({b, p + 1, y.element_bound()});
    return b;
  }

  static int compare(const PName& a, const PName& b) {
    if (a.node_ == b.node_) return 0;
    if (a.rank() != b.rank()) return a.rank() < b.rank() ? -1 : 1;
    const auto& x = a.pairs();
    const auto& y = b.pairs();
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (int c = compare(x[i].first, y[i].first)) return c;
      if (x[i].second != y[i].second) return x[i].second < y[i].second ? -1 : 1;
    }
    return 0;
  }
  friend bool operator==(const PName& a, const PName& b) { return a.hash() == b.hash() && compare(a, b) == 0; }
  friend bool operator<(const PName& a, const PName& b) { return compare(a, b) < 0; }

  std::string to_string(const FinitePoset* P = nullptr) const {
    std::string s = "{";
    for (std::size_t i = 0; i < pairs().size(); ++i) {
      const auto& [y, p] = pairs()[i];
      s += (i ? ",[" : "[") + y.to_string(P) + "," + (P ? P->name(p) : std::to_string(p)) + "]";
    }
    return s + "}";
  }

 private:
  struct Node {
    std::vector<Pair> pairs;
    std::size_t rank = 0;
    std::size_t hash = 0;
  };
  explicit PName(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> empty_node() {
    static const auto e = [] {
      auto n = std::make_shared<Node>();
      n->hash = detail::mix_hash(0x6a09e667, 0);
      return std::shared_ptr<const Node>(std::move(n));
    }();
    return e;
  }

  std::shared_ptr<const Node> node_;
};

struct PNameHash {
  std::size_t operator()(const PName& s) const { return s.hash(); }
};

inline constexpr std::size_t kDefaultNameRankBound = 8;

/// ǎ = { [b̌, 1] : b ∈ a }.
inline PName check_name(const HFSet& a, const FinitePoset& P, std::size_t rank_bound = kDefaultNameRankBound) {
  if (a.rank() > rank_bound) throw CapRefusal("check name rank", rank_bound);
  const Element top = P.top();
  if (top == P.size()) throw DomainError("check names need a poset with a maximum");
  std::vector<PName::Pair> pairs;
  for (const auto& b : a.members()) pairs.emplace_back(check_name(b, P, rank_bound), top);
  return PName::make(std::move(pairs));
}

/// Poset element p is the ordinal p in the ground universe.
inline HFSet element_set(Element p) { return HFSet::ordinal(p); }

/// { [p̌, p] : p ∈ P }.
inline PName gname(const FinitePoset& P) {
  std::vector<PName::Pair> pairs;
  for (Element p = 0; p < P.size(); ++p) pairs.emplace_back(check_name(element_set(p), P), p);
  return PName::make(std::move(pairs));
}

/// x^G = { y^G : (∃p ∈ G) [y,p] ∈ x }.
inline HFSet eval_name(const PName& x, const ElementSet& G) {
  std::vector<HFSet> m;
  for (const auto& [y, p] : x.pairs())
    if (G.contains(p)) m.push_back(eval_name(y, G));
  return HFSet::make(std::move(m));
}

/// Position of (r0, r1) in the order by max, then min, then first component.
inline std::size_t pair_rank(std::size_t r0, std::size_t r1) {
  const std::size_t m = std::max(r0, r1);
  const std::size_t k = std::min(r0, r1);
  return m * m + 2 * k + (r0 == m && r1 < m ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Sentences. Terms are names or variables bound by a quantifier over an
// explicit list of names.

class Sentence {
 public:
  enum class Kind { In, Eq, InM, Not, And, Or, Implies, Iff, Forall, Exists };

  struct Term {
    bool is_var = false;
    std::size_t var = 0;
    PName name;
  };
  static Term name(PName x) { return Term{false, 0, std::move(x)}; }
  static Term var(std::size_t v) { return Term{true, v, PName()}; }

  static Sentence in(Term a, Term b) { return prim(Kind::In, std::move(a), std::move(b)); }
  static Sentence eq(Term a, Term b) { return prim(Kind::Eq, std::move(a), std::move(b)); }
  static Sentence in_m(Term a) { return prim(Kind::InM, std::move(a), Term{}); }
  static Sentence neg(Sentence s) { return conn(Kind::Not, {std::move(s)}); }
  static Sentence conj(Sentence a, Sentence b) { return conn(Kind::And, {std::move(a), std::move(b)}); }
  static Sentence disj(Sentence a, Sentence b) { return conn(Kind::Or, {std::move(a), std::move(b)}); }
  static Sentence implies(Sentence a, Sentence b) { return conn(Kind::Implies, {std::move(a), std::move(b)}); }
  static Sentence iff(Sentence a, Sentence b) { return conn(Kind::Iff, {std::move(a), std::move(b)}); }
  static Sentence forall(std::size_t v, std::vector<PName> bound, Sentence body) {
    return quant(Kind::Forall, v, std::move(bound), std::move(body));
  }
  static Sentence exists(std::size_t v, std::vector<PName> bound, Sentence body) {
    return quant(Kind::Exists, v, std::move(bound), std::move(body));
  }

  Kind kind() const { return node_->kind; }
  const Term& t0() const { return node_->t0; }
  const Term& t1() const { return node_->t1; }
  const std::vector<Sentence>& kids() const { return node_->kids; }
  std::size_t var() const { return node_->var; }
  const std::vector<PName>& bound() const { return node_->bound; }

  /// Same syntax as parse_sentence; element names need the poset.
  std::string to_string(const FinitePoset* P = nullptr) const {
    auto term = [&](const Term& t) { return t.is_var ? "u" + std::to_string(t.var) : t.name.to_string(P); };
    auto bin = [&](const char* op) { return std::string(op) + "(" + kids()[0].to_string(P) + "," + kids()[1].to_string(P) + ")"; };
    switch (kind()) {
      case Kind::In: return "in(" + term(t0()) + "," + term(t1()) + ")";
      case Kind::Eq: return "eq(" + term(t0()) + "," + term(t1()) + ")";
      case Kind::InM: return "M(" + term(t0()) + ")";
      case Kind::Not: return "not(" + kids()[0].to_string(P) + ")";
      case Kind::And: return bin("and");
      case Kind::Or: return bin("or");
      case Kind::Implies: return bin("implies");
      case Kind::Iff: return bin("iff");
      case Kind::Forall:
      case Kind::Exists: {
        std::string s = kind() == Kind::Forall ? "forall(u" : "exists(u";
        s += std::to_string(var()) + ",[";
        for (std::size_t i = 0; i < bound().size(); ++i) s += (i ? "," : "") + bound()[i].to_string(P);
        return s + "]," + kids()[0].to_string(P) + ")";
      }
    }
    return {};
  }

 private:
  struct Node {
    Kind kind = Kind::In;
    Term t0, t1;
    std::vector<Sentence> kids;
    std::size_t var = 0;
    std::vector<PName> bound;
  };
  explicit Sentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Sentence prim(Kind k, Term a, Term b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->t0 = std::move(a);
    n->t1 = std::move(b);
    return Sentence(std::move(n));
  }
  static Sentence conn(Kind k, std::vector<Sentence> kids) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    return Sentence(std::move(n));
  }
  static Sentence quant(Kind k, std::size_t v, std::vector<PName> bound, Sentence body) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->var = v;
    n->bound = std::move(bound);
    n->kids.push_back(std::move(body));
    return Sentence(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

using Environment = std::vector<std::pair<std::size_t, PName>>;

inline const PName& resolve(const Sentence::Term& t, const Environment& env) {
  if (!t.is_var) return t.name;
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == t.var) return it->second;
  throw InputError("unbound variable u" + std::to_string(t.var));
}

/// Boolean values in Reg P for one poset, with the ∈/= recursion memoized.
class ForcingSession {
 public:
  using Elem = ElementSet;

  /// `ground` is the finite universe M used for M̃.
  ForcingSession(const FinitePoset& P, std::vector<HFSet> ground)
      : P_(&P), reg_(regular_algebra(P)), ground_(std::move(ground)) {
    for (const auto& a : ground_) ground_names_.push_back(check_name(a, P));
  }

  const FinitePoset& poset() const { return *P_; }
  const RegularAlgebraResult& reg() const { return reg_; }
  const FiniteBooleanAlgebra& algebra() const { return reg_.algebra; }
  const std::vector<HFSet>& ground() const { return ground_; }
  /// p̄, the regular closure of ⌈p⌉.
  const Elem& bar(Element p) const { return reg_.embed.at(P_->check(p)); }

  Elem bv_in(const PName& x0, const PName& x1) { return bv(Kind::In, x0, x1); }
  Elem bv_eq(const PName& x0, const PName& x1) { return bv(Kind::Eq, x0, x1); }

  /// ⋁_{a ∈ M} ⟦x = ǎ⟧.
  Elem bv_in_m(const PName& x) {
    Elem r = algebra().zero();
    for (const auto& a : ground_names_) r = algebra().join(r, bv_eq(x, a));
    return r;
  }

  /// ⋁_{a ∈ universe} ⟦x = ǎ⟧ for an explicit universe.
  Elem bv_in_m(const PName& x, const std::vector<HFSet>& universe) {
    Elem r = algebra().zero();
    for (const auto& a : universe) r = algebra().join(r, bv_eq(x, check_name(a, *P_)));
    return r;
  }

  Elem bv_sentence(const Sentence& s) {
    Environment env;
    return bv_sentence(s, env);
  }

  Elem bv_sentence(const Sentence& s, Environment& env) {
    using K = Sentence::Kind;
    const auto& A = algebra();
    switch (s.kind()) {
      case K::In: return bv_in(resolve(s.t0(), env), resolve(s.t1(), env));
      case K::Eq: return bv_eq(resolve(s.t0(), env), resolve(s.t1(), env));
      case K::InM: return bv_in_m(resolve(s.t0(), env));
      case K::Not: return A.complement(bv_sentence(s.kids()[0], env));
      case K::And: return A.meet(bv_sentence(s.kids()[0], env), bv_sentence(s.kids()[1], env));
      case K::Or: return A.join(bv_sentence(s.kids()[0], env), bv_sentence(s.kids()[1], env));
      case K::Implies: return A.implies(bv_sentence(s.kids()[0], env), bv_sentence(s.kids()[1], env));
      case K::Iff: return A.iff(bv_sentence(s.kids()[0], env), bv_sentence(s.kids()[1], env));
      case K::Forall:
      case K::Exists: {
        const bool all = s.kind() == K::Forall;
        Elem r = all ? A.one() : A.zero();
        for (const auto& x : s.bound()) {
          env.emplace_back(s.var(), x);
          const Elem v = bv_sentence(s.kids()[0], env);
          env.pop_back();
          r = all ? A.meet(r, v) : A.join(r, v);
        }
        return r;
      }
    }
    throw DomainError("corrupt sentence node");
  }

  /// Overwrites a memo entry; used to check that corrupted values are caught.
  void inject_memo(bool membership, const PName& x0, const PName& x1, Elem value) {
    memo_[Key{membership ? Kind::In : Kind::Eq, x0, x1}] = std::move(value);
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  enum class Kind { In, Eq };
  struct Key {
    Kind kind;
    PName x0, x1;
    friend bool operator==(const Key& a, const Key& b) { return a.kind == b.kind && a.x0 == b.x0 && a.x1 == b.x1; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return detail::mix_hash(detail::mix_hash(static_cast<std::size_t>(k.kind), k.x0.hash()), k.x1.hash());
    }
  };

  void check_names(const PName& x) const {
    if (x.element_bound() > P_->size()) throw DomainError("poset mismatch: name mentions an unknown element");
  }

  static void assert_descent(std::size_t from, std::size_t to) {
    if (!(to < from)) throw DomainError("rank assertion failed in boolean-value recursion");
  }

  Elem bv(Kind k, const PName& x0, const PName& x1) {
    const Key key{k, x0, x1};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    check_names(x0);
    check_names(x1);
    const auto& A = algebra();
    const std::size_t here = pair_rank(x0.rank(), x1.rank());
    Elem r;
    if (k == Kind::In) {
      r = A.zero();
      for (const auto& [y, p] : x1.pairs()) {
        assert_descent(here, pair_rank(y.rank(), x0.rank()));
        r = A.join(r, A.meet(bar(p), bv(Kind::Eq, y, x0)));
      }
    } else {
      r = A.one();
      for (const auto& [y, p] : x0.pairs()) {
        assert_descent(here, pair_rank(y.rank(), x1.rank()));
        r = A.meet(r, A.implies(bar(p), bv(Kind::In, y, x1)));
      }
      for (const auto& [y, p] : x1.pairs()) {
        assert_descent(here, pair_rank(y.rank(), x0.rank()));
        r = A.meet(r, A.implies(bar(p), bv(Kind::In, y, x0)));
      }
    }
    memo_.emplace(key, r);
    return r;
  }

  const FinitePoset* P_;
  RegularAlgebraResult reg_;
  std::vector<HFSet> ground_;
  std::vector<PName> ground_names_;
  std::unordered_map<Key, Elem, KeyHash> memo_;
};

/// Direct evaluation in the evaluated structure under the filter G.
inline bool holds_in_extension(const Sentence& s, const ElementSet& G, const std::vector<HFSet>& ground,
                               Environment& env) {
  using K = Sentence::Kind;
  switch (s.kind()) {
    case K::In: return eval_name(resolve(s.t1(), env), G).contains(eval_name(resolve(s.t0(), env), G));
    case K::Eq: return eval_name(resolve(s.t0(), env), G) == eval_name(resolve(s.t1(), env), G);
    case K::InM: {
      const HFSet v = eval_name(resolve(s.t0(), env), G);
      return std::find(ground.begin(), ground.end(), v) != ground.end();
    }
    case K::Not: return !holds_in_extension(s.kids()[0], G, ground, env);
    case K::And: return holds_in_extension(s.kids()[0], G, ground, env) && holds_in_extension(s.kids()[1], G, ground, env);
    case K::Or: return holds_in_extension(s.kids()[0], G, ground, env) || holds_in_extension(s.kids()[1], G, ground, env);
    case K::Implies:
      return !holds_in_extension(s.kids()[0], G, ground, env) || holds_in_extension(s.kids()[1], G, ground, env);
    case K::Iff: return holds_in_extension(s.kids()[0], G, ground, env) == holds_in_extension(s.kids()[1], G, ground, env);
    case K::Forall:
    case K::Exists: {
      const bool all = s.kind() == K::Forall;
      for (const auto& x : s.bound()) {
        env.emplace_back(s.var(), x);
        const bool v = holds_in_extension(s.kids()[0], G, ground, env);
        env.pop_back();
        if (v != all) return v;
      }
      return all;
    }
  }
  return false;
}

inline bool holds_in_extension(const Sentence& s, const ElementSet& G, const std::vector<HFSet>& ground) {
  Environment env;
  return holds_in_extension(s, G, ground, env);
}

struct TruthLemmaDiscrepancy {
  std::size_t sentence = 0;
  Element generic_at = 0;
  bool holds = false;
  bool forced = false;
};

struct TruthLemmaReport {
  std::size_t generics = 0;
  std::size_t sentences = 0;
  std::size_t checks = 0;
  std::vector<TruthLemmaDiscrepancy> discrepancies;
};

/// For each generic filter (principal at a minimal element) and each
/// sentence: the sentence holds in the extension iff G meets ⟦σ⟧.
inline TruthLemmaReport truth_lemma_check(ForcingSession& session, const std::vector<Sentence>& corpus) {
  const FinitePoset& P = session.poset();
  TruthLemmaReport rep;
  rep.sentences = corpus.size();
  std::vector<ElementSet> values;
  for (const auto& s : corpus) values.push_back(session.reg().to_poset_set(session.bv_sentence(s)));
  P.minimal_elements().for_each([&](Element m) {
    ++rep.generics;
    const ElementSet& G = P.up(m);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      ++rep.checks;
      const bool holds = holds_in_extension(corpus[i], G, session.ground());
      const bool forced = G.intersects(values[i]);
      if (holds != forced) rep.discrepancies.push_back({i, m, holds, forced});
    }
  });
  return rep;
}

/// Names of rank ≤ 1: every set of pairs [∅, p].
inline std::vector<PName> rank_one_names(const FinitePoset& P) {
  if (P.size() > 12) throw CapRefusal("rank-one name enumeration", 12);
  std::vector<PName> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << P.size()); ++m) {
    std::vector<PName::Pair> pairs;
    for (Element p = 0; p < P.size(); ++p)
      if ((m >> p) & 1U) pairs.emplace_back(PName(), p);
    out.push_back(PName::make(std::move(pairs)));
  }
  return out;
}

/// A name of rank exactly `rank` built from random pairs over `pool`
/// (which must contain a name of rank rank−1).
template <class Rng>
PName random_name(Rng& rng, const FinitePoset& P, const std::vector<PName>& pool, std::size_t rank,
                  std::size_t max_pairs = 3) {
  std::vector<PName> below, top;
  for (const auto& x : pool) {
    if (x.rank() < rank) below.push_back(x);
    if (rank > 0 && x.rank() == rank - 1) top.push_back(x);
  }
  if (rank == 0) return PName();
  if (top.empty()) throw InputError("name pool lacks a name of rank " + std::to_string(rank - 1));
  std::vector<PName::Pair> pairs;
  pairs.emplace_back(top[rng() % top.size()], static_cast<Element>(rng() % P.size()));
  const std::size_t extra = rng() % max_pairs;
  for (std::size_t i = 0; i < extra; ++i)
    pairs.emplace_back(below[rng() % below.size()], static_cast<Element>(rng() % P.size()));
  return PName::make(std::move(pairs));
}

/// Random sentences over a name universe: primitives ∈, =, M̃, the five
/// connectives, and bounded quantifiers over short name lists.
template <class Rng>
Sentence random_sentence(Rng& rng, const std::vector<PName>& names, std::size_t depth, std::size_t next_var = 0,
                         std::vector<std::size_t> vars = {}) {
  auto term = [&]() {
    if (!vars.empty() && rng() % 3 == 0) return Sentence::var(vars[rng() % vars.size()]);
    return Sentence::name(names[rng() % names.size()]);
  };
  const std::size_t pick = depth == 0 ? rng() % 3 : rng() % 10;
  switch (pick) {
    case 0: return Sentence::in(term(), term());
    case 1: return Sentence::eq(term(), term());
    case 2: return Sentence::in_m(term());
    case 3: return Sentence::neg(random_sentence(rng, names, depth - 1, next_var, vars));
    case 4:
      return Sentence::conj(random_sentence(rng, names, depth - 1, next_var, vars),
                            random_sentence(rng, names, depth - 1, next_var, vars));
    case 5:
      return Sentence::disj(random_sentence(rng, names, depth - 1, next_var, vars),
                            random_sentence(rng, names, depth - 1, next_var, vars));
    case 6:
      return Sentence::implies(random_sentence(rng, names, depth - 1, next_var, vars),
                               random_sentence(rng, names, depth - 1, next_var, vars));
    case 7:
      return Sentence::iff(random_sentence(rng, names, depth - 1, next_var, vars),
                           random_sentence(rng, names, depth - 1, next_var, vars));
    default: {
      std::vector<PName> bound;
      const std::size_t w = 1 + rng() % 3;
      for (std::size_t i = 0; i < w; ++i) bound.push_back(names[rng() % names.size()]);
      auto inner = vars;
      inner.push_back(next_var);
      Sentence body = random_sentence(rng, names, depth - 1, next_var + 1, inner);
      return pick == 8 ? Sentence::forall(next_var, std::move(bound), std::move(body))
                       : Sentence::exists(next_var, std::move(bound), std::move(body));
    }
  }
}

// ---------------------------------------------------------------------------
// Name literals: "check(<hf>)", "gname", or "{[<name>,<elem>],...}" with
// elements given by poset name. Sentences:
//   in(x,y)  eq(x,y)  M(x)  not(s)  and(s,t)  or(s,t)  implies(s,t)  iff(s,t)
//   forall(u0,[x,...],s)  exists(u0,[x,...],s)
// where a variable u<k> may stand in for a name inside a quantifier body.

namespace detail {

class ForcingParser {
 public:
  ForcingParser(std::string_view t, const FinitePoset& P) : t_(t), P_(P) {}

  PName parse_name_all() {
    PName r = name(0);
    finish();
    return r;
  }
  Sentence parse_sentence_all() {
    Sentence s = sentence(0);
    finish();
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const {
    throw InputError("syntax error at position " + std::to_string(pos_) + ": " + m);
  }
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  bool eat(std::string_view s) {
    skip();
    if (t_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!eat(s)) fail("expected '" + std::string(s) + "'");
  }
  void finish() {
    skip();
    if (pos_ != t_.size()) fail("trailing input");
  }
  std::size_t number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 6) fail("expected a variable number");
    return std::stoul(std::string(t_.substr(start, pos_ - start)));
  }

  PName name(std::size_t depth) {
    if (depth > 32) fail("nesting too deep");
    if (eat("gname")) return gname(P_);
    if (eat("check(")) {
      int level = 1;
      const std::size_t start = pos_;
      while (pos_ < t_.size() && level > 0) {
        if (t_[pos_] == '(') ++level;
        if (t_[pos_] == ')') --level;
        ++pos_;
      }
      if (level != 0) fail("unterminated check(");
      return check_name(parse_hf(t_.substr(start, pos_ - 1 - start)), P_);
    }
    expect("{");
    std::vector<PName::Pair> pairs;
    if (eat("}")) return PName();
    for (;;) {
      expect("[");
      PName y = name(depth + 1);
      expect(",");
      skip();
      const std::size_t start = pos_;
      while (pos_ < t_.size() && t_[pos_] != ']' && t_[pos_] != ',' && !std::isspace(static_cast<unsigned char>(t_[pos_])))
        ++pos_;
      const Element p = P_.index(std::string(t_.substr(start, pos_ - start)));
      expect("]");
      pairs.emplace_back(std::move(y), p);
      if (eat(",")) continue;
      expect("}");
      return PName::make(std::move(pairs));
    }
  }

  Sentence::Term term() {
    skip();
    if (pos_ < t_.size() && t_[pos_] == 'u') {
      ++pos_;
      return Sentence::var(number());
    }
    return Sentence::name(name(0));
  }

  Sentence sentence(std::size_t depth) {
    if (depth > 64) fail("nesting too deep");
    auto binary = [&](auto make) {
      Sentence a = sentence(depth + 1);
      expect(",");
      Sentence b = sentence(depth + 1);
      expect(")");
      return make(std::move(a), std::move(b));
    };
    if (eat("in(") || eat("eq(")) {
      const bool in = t_.substr(pos_ - 3, 3) == "in(";
      auto a = term();
      expect(",");
      auto b = term();
      expect(")");
      return in ? Sentence::in(std::move(a), std::move(b)) : Sentence::eq(std::move(a), std::move(b));
    }
    if (eat("M(")) {
      auto a = term();
      expect(")");
      return Sentence::in_m(std::move(a));
    }
    if (eat("not(")) {
      Sentence a = sentence(depth + 1);
      expect(")");
      return Sentence::neg(std::move(a));
    }
    if (eat("and(")) return binary(Sentence::conj);
    if (eat("or(")) return binary(Sentence::disj);
    if (eat("implies(")) return binary(Sentence::implies);
    if (eat("iff(")) return binary(Sentence::iff);
    const bool all = eat("forall(");
    if (all || eat("exists(")) {
      expect("u");
      const std::size_t v = number();
      expect(",");
      expect("[");
      std::vector<PName> bound;
      if (!eat("]")) {
        do bound.push_back(name(0));
        while (eat(","));
        expect("]");
      }
      expect(",");
      Sentence body = sentence(depth + 1);
      expect(")");
      return all ? Sentence::forall(v, std::move(bound), std::move(body))
                 : Sentence::exists(v, std::move(bound), std::move(body));
    }
    fail("expected a sentence");
  }

  std::string_view t_;
  const FinitePoset& P_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PName parse_name(std::string_view t, const FinitePoset& P) { return detail::ForcingParser(t, P).parse_name_all(); }

inline Sentence parse_sentence(std::string_view t, const FinitePoset& P) {
  return detail::ForcingParser(t, P).parse_sentence_all();
}

}  // namespace genlab
