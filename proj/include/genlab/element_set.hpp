#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace genlab {

/// Fixed-universe bit vector. The universe size is set at construction and
/// never changes; all binary operations require equal universe sizes.
class ElementSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : size_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}
  ElementSet(std::size_t universe, std::initializer_list<std::size_t> members) : ElementSet(universe) {
    for (auto m : members) insert(m);
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }

  /// Set whose members are the set bits of `mask` (universe must be <= 64).
  static ElementSet from_mask(std::size_t universe, std::uint64_t mask) {
    ElementSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    s.trim();
    return s;
  }

  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  std::size_t universe() const noexcept { return size_; }

  bool contains(std::size_t i) const { return i < size_ && ((words_[i / kWordBits] >> (i % kWordBits)) & 1U); }
  void insert(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void erase(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  bool intersects(const ElementSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }
  bool subset_of(const ElementSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  ElementSet& operator|=(const ElementSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  ElementSet& operator-=(const ElementSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  ElementSet complement() const {
    ElementSet r(*this);
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  /// Smallest member, or universe() when empty.
  std::size_t first() const { return next(0); }

  /// Smallest member >= i, or universe() when none.
  std::size_t next(std::size_t i) const {
    if (i >= size_) return size_;
    std::size_t k = i / kWordBits;
    Word w = words_[k] & (~Word{0} << (i % kWordBits));
    while (true) {
      if (w) return std::min(size_, k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
      if (++k == words_.size()) return size_;
      w = words_[k];
    }
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = first(); i < size_; i = next(i + 1)) f(i);
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  /// Total order: universe size, then members compared as little-endian words.
  friend bool operator<(const ElementSet& a, const ElementSet& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(size_);
    for (auto w : words_) h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  void trim() {
    if (size_ % kWordBits && !words_.empty()) words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace genlab
