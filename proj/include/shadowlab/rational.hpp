#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace shadowlab {

// Exact scalar used for every distance and threshold in the library.
// All inputs are rationalized on entry; no floating point is used in any
// comparison that decides a verdict.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// Canonical form "p/q", lowest terms, q > 0. Integers render as "p/1".
inline std::string to_string(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "p/q" or a bare integer "p". q must be a positive integer.
inline std::optional<Rat> parse_rat(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  if (pos >= text.size()) return std::nullopt;
  long long num = 0;
  std::size_t digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    if (num > (std::numeric_limits<long long>::max() - 9) / 10) return std::nullopt;
    num = num * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  long long den = 1;
  if (pos < text.size()) {
    if (text[pos] != '/') return std::nullopt;
    ++pos;
    den = 0;
    digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (den > (std::numeric_limits<long long>::max() - 9) / 10) return std::nullopt;
      den = den * 10 + (text[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0 || pos != text.size() || den == 0) return std::nullopt;
  }
  return Rat(negative ? -num : num, den);
}

struct RatHash {
  std::size_t operator()(const Rat& r) const noexcept {
    std::size_t h = std::hash<long long>{}(r.numerator());
    std::size_t g = std::hash<long long>{}(r.denominator());
    return h ^ (g + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
};

// Smallest m with (m/scale)^2 >= num/den, returned as m/scale.
// Rounding every distance up through a shared ceiling preserves the
// triangle inequality of the source metric: ceil(x+y) <= ceil(x)+ceil(y).
inline Rat ceil_sqrt_scaled(long long num, long long den, long long scale) {
  using Wide = unsigned __int128;
  if (num < 0 || den <= 0 || scale <= 0) return Rat(0);
  if (num == 0) return Rat(0);
  const Wide target = Wide(num) * Wide(scale) * Wide(scale);
  auto big_enough = [&](long long m) { return Wide(m) * Wide(m) * Wide(den) >= target; };
  long long hi = 1;
  while (!big_enough(hi)) hi *= 2;
  long long lo = hi / 2;
  while (lo + 1 < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (big_enough(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Rat(hi, scale);
}

}  // namespace shadowlab
