#pragma once

#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace fairbisect {

/// Set of vertex ids 0..n-1 backed by a word array.  All binary operations
/// require both operands to have the same capacity.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int capacity) : n_(capacity), w_((capacity + 63) / 64, 0) {}

  static VertexSet of(int capacity, std::initializer_list<int> ids) {
    VertexSet s(capacity);
    for (int i : ids) s.set(i);
    return s;
  }

  static VertexSet from_vector(int capacity, const std::vector<int>& ids) {
    VertexSet s(capacity);
    for (int i : ids) s.set(i);
    return s;
  }

  static VertexSet full(int capacity) {
    VertexSet s(capacity);
    for (int i = 0; i < capacity; ++i) s.set(i);
    return s;
  }

  int capacity() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }

  void set(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] |= uint64_t(1) << (i & 63);
  }

  void reset(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] &= ~(uint64_t(1) << (i & 63));
  }

  void clear() {
    for (auto& w : w_) w = 0;
  }

  int count() const {
    int c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }

  bool empty() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }

  bool any() const { return !empty(); }

  /// Smallest member, or -1 if empty.
  int first() const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w_[i]));
    return -1;
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        f(static_cast<int>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  VertexSet& operator|=(const VertexSet& o) {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  VertexSet& operator&=(const VertexSet& o) {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  /// Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool is_subset_of(const VertexSet& o) const {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool intersects(const VertexSet& o) const {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool operator==(const VertexSet& o) const = default;

  /// Lexicographic order on the word representation; a stable total order
  /// used wherever deterministic iteration over sets is required.
  bool operator<(const VertexSet& o) const {
    assert(n_ == o.n_);
    for (size_t i = w_.size(); i-- > 0;)
      if (w_[i] != o.w_[i]) return w_[i] < o.w_[i];
    return false;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace fairbisect
