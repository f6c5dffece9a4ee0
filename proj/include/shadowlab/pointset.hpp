#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shadowlab {

// Subset of the points of a fixed finite space, bitset semantics.
// All binary operations require equal universe sizes.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

  static PointSet full(std::size_t universe) {
    PointSet s(universe);
    for (std::size_t i = 0; i < s.w_.size(); ++i) s.w_[i] = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool empty() const {
    for (std::uint64_t w : w_)
      if (w != 0) return false;
    return true;
  }

  bool operator==(const PointSet& o) const = default;

  PointSet& operator&=(const PointSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  PointSet& operator|=(const PointSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  PointSet& subtract(const PointSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  bool intersects(const PointSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool is_subset_of(const PointSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  // Smallest member, -1 if empty.
  int first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] != 0) return static_cast<int>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[i])));
    return -1;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(count());
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w != 0) {
        out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  PointSet complement() const {
    PointSet s(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) s.w_[i] = ~w_[i];
    s.trim();
    return s;
  }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ull;
    for (std::uint64_t w : w_) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }

 private:
  void trim() {
    if (n_ % 64 != 0 && !w_.empty()) w_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

inline PointSet operator&(PointSet a, const PointSet& b) {
  a &= b;
  return a;
}
inline PointSet operator|(PointSet a, const PointSet& b) {
  a |= b;
  return a;
}

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const noexcept { return s.hash(); }
};

// Image of a set under a permutation given as an index array.
inline PointSet image(const PointSet& s, const std::vector<int>& perm) {
  PointSet out(s.universe());
  for (std::size_t i = 0; i < s.universe(); ++i)
    if (s.test(i)) out.set(static_cast<std::size_t>(perm[i]));
  return out;
}

}  // namespace shadowlab
