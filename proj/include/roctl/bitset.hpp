// Small dynamically sized bit set used for state sets and relations.
#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace roctl {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v = true) {
    if (v) {
      w_[i >> 6] |= (std::uint64_t{1} << (i & 63));
    } else {
      w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }
  bool none() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool intersects(const Bitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  friend bool operator==(const Bitset& a, const Bitset& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
  friend bool operator<(const Bitset& a, const Bitset& b) {
    return a.n_ != b.n_ ? a.n_ < b.n_ : a.w_ < b.w_;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        int b = std::countr_zero(w);
        fn(i * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> v;
    for_each([&](std::size_t i) { v.push_back(static_cast<int>(i)); });
    return v;
  }

  std::size_t hash() const {
    std::size_t h = n_;
    for (auto w : w_) h = h * 1000003u ^ std::hash<std::uint64_t>()(w);
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace roctl
