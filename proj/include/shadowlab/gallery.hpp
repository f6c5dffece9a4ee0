#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/metric_space.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

// Deterministic generators for the example systems used throughout the test
// suite and the CLI. Same parameters (and seed) always produce bit-identical
// systems; random draws go through next_below so the output is fixed by the
// mt19937_64 specification, not by a library distribution.

namespace detail {

inline std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t m) { return rng() % m; }

inline long long pow3(int e) {
  long long v = 1;
  for (int i = 0; i < e; ++i) v *= 3;
  return v;
}

// Exact squared Euclidean distance (num/den) computed in 128-bit, then
// rounded up onto the 1/scale grid. See ceil_sqrt_scaled for why rounding up
// keeps the triangle inequality.
inline Rat euclidean_dist(const Rat& x1, const Rat& y1, const Rat& x2, const Rat& y2,
                          long long scale) {
  using Wide = __int128;
  const Rat dx = x1 - x2;
  const Rat dy = y1 - y2;
  const Wide num = Wide(dx.numerator()) * dx.numerator() * dy.denominator() * dy.denominator() +
                   Wide(dy.numerator()) * dy.numerator() * dx.denominator() * dx.denominator();
  const Wide den = Wide(dx.denominator()) * dx.denominator() * dy.denominator() * dy.denominator();
  if (num > Wide(std::numeric_limits<long long>::max()) ||
      den > Wide(std::numeric_limits<long long>::max()))
    throw BadParams("coordinate denominators too large for exact distance computation");
  return ceil_sqrt_scaled(static_cast<long long>(num), static_cast<long long>(den), scale);
}

}  // namespace detail

// Denominator of the grid onto which Euclidean distances are rounded.
inline constexpr long long kEuclideanScale = 1024;
// Coordinate grid for random points in the unit square.
inline constexpr long long kCoordinateGrid = 64;
// Tree edge weights are multiples of 1/kTreeScale.
inline constexpr long long kTreeScale = 64;

// Points 0..n-1 on a circle, d(i,j) = min(|i-j|, n-|i-j|)/n, map i -> i+k.
// Isometric; minimal exactly when gcd(k, n) = 1.
inline DynSystem circle_rotation(int n, int k) {
  if (n < 2) throw BadParams("circle_rotation requires n >= 2");
  if (k < 0 || k >= n) throw BadParams("circle_rotation requires 0 <= k < n");
  std::vector<std::vector<Rat>> d(static_cast<std::size_t>(n),
                                  std::vector<Rat>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int gap = std::abs(i - j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(std::min(gap, n - gap), n);
    }
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<int> perm;
  for (int i = 0; i < n; ++i) perm.push_back((i + k) % n);
  return DynSystem(FiniteMetricSpace(std::move(labels), d), std::move(perm));
}

inline DynSystem identity_on(FiniteMetricSpace space) {
  std::vector<int> perm(space.size());
  std::iota(perm.begin(), perm.end(), 0);
  return DynSystem(std::move(space), std::move(perm));
}

// 2^levels points as little-endian bit strings, d(x,y) = 2^-v with v the
// lowest differing bit, map = +1 with carry. A single cycle, isometric for
// this metric, and totally disconnected at every sufficiently small gap.
inline DynSystem odometer(int levels) {
  if (levels < 1 || levels > 12) throw BadParams("odometer requires 1 <= levels <= 12");
  const int n = 1 << levels;
  std::vector<std::vector<Rat>> d(static_cast<std::size_t>(n),
                                  std::vector<Rat>(static_cast<std::size_t>(n)));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      const int v = __builtin_ctz(static_cast<unsigned>(x ^ y));
      d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = Rat(1, 1LL << v);
    }
  std::vector<std::string> labels;
  for (int x = 0; x < n; ++x) {
    std::string bits;
    for (int b = 0; b < levels; ++b) bits.push_back((x >> b) & 1 ? '1' : '0');
    labels.push_back(bits);
  }
  std::vector<int> perm;
  for (int x = 0; x < n; ++x) perm.push_back((x + 1) % n);
  return DynSystem(FiniteMetricSpace(std::move(labels), d), std::move(perm));
}

// Torus (Z/n)^2 with the max of coordinate circle metrics and the unimodular
// map (x, y) -> (2x + y, x + y). Hyperbolic contrast case: not an isometry.
inline DynSystem cat_map(int n) {
  if (n < 2) throw BadParams("cat_map requires n >= 2");
  const int m = n * n;
  auto circ = [n](int a, int b) {
    const int gap = std::abs(a - b);
    return Rat(std::min(gap, n - gap), n);
  };
  std::vector<std::vector<Rat>> d(static_cast<std::size_t>(m),
                                  std::vector<Rat>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::max(circ(i / n, j / n), circ(i % n, j % n));
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i)
    labels.push_back("(" + std::to_string(i / n) + "," + std::to_string(i % n) + ")");
  std::vector<int> perm;
  for (int i = 0; i < m; ++i) {
    const int x = i / n;
    const int y = i % n;
    perm.push_back(((2 * x + y) % n) * n + (x + y) % n);
  }
  return DynSystem(FiniteMetricSpace(std::move(labels), d), std::move(perm));
}

// Level-k ternary Cantor endpoints in [0,1] (the 2^level left endpoints plus
// the right endpoint 1) joined with a uniform grid on [1,2]; the point 1 is
// shared. Metric is |x - y|. Labels are the exact rationals.
inline FiniteMetricSpace cantor_plus_interval(int level, int grid) {
  if (level < 1 || level > 16) throw BadParams("cantor_plus_interval requires 1 <= level <= 16");
  if (grid < 2) throw BadParams("cantor_plus_interval requires grid >= 2");
  const long long q = detail::pow3(level);
  std::vector<Rat> pts;
  for (long long mask = 0; mask < (1LL << level); ++mask) {
    long long num = 0;
    for (int i = 0; i < level; ++i) {
      // digit a_{i+1} in {0,2} contributes a * 3^{level-1-i}
      const long long a = (mask >> (level - 1 - i)) & 1 ? 2 : 0;
      num = num * 3 + a;
    }
    pts.push_back(Rat(num, q));
  }
  pts.push_back(Rat(1));
  for (int t = 0; t < grid; ++t) pts.push_back(Rat(1) + Rat(t, grid - 1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const std::size_t n = pts.size();
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = pts[i] >= pts[j] ? pts[i] - pts[j] : pts[j] - pts[i];
  std::vector<std::string> labels;
  for (const Rat& p : pts) labels.push_back(to_string(p));
  return FiniteMetricSpace(std::move(labels), d);
}

enum class RandomMetricKind { euclidean_square, random_tree };

namespace detail {

// Draw order is part of the determinism contract: coordinate pairs in point
// order (redrawing both on a duplicate), then the permutation by Fisher-Yates
// from the top index down.
inline std::vector<std::pair<Rat, Rat>> draw_coords(int n, std::mt19937_64& rng) {
  std::vector<std::pair<Rat, Rat>> coords;
  std::vector<std::pair<long long, long long>> used;
  for (int i = 0; i < n; ++i) {
    long long x = 0;
    long long y = 0;
    while (true) {
      x = static_cast<long long>(next_below(rng, kCoordinateGrid + 1));
      y = static_cast<long long>(next_below(rng, kCoordinateGrid + 1));
      if (std::find(used.begin(), used.end(), std::make_pair(x, y)) == used.end()) break;
    }
    used.emplace_back(x, y);
    coords.emplace_back(Rat(x, kCoordinateGrid), Rat(y, kCoordinateGrid));
  }
  return coords;
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i >= 1; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[next_below(rng, static_cast<std::uint64_t>(i) + 1)]);
  return perm;
}

}  // namespace detail

// The coordinates random_system(n, seed, euclidean_square) embeds; exposed so
// file encoders can reproduce the identical system.
inline std::vector<std::pair<Rat, Rat>> random_euclidean_coords(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::draw_coords(n, rng);
}

inline FiniteMetricSpace euclidean_space_from_coords(
    const std::vector<std::pair<Rat, Rat>>& coords) {
  const std::size_t n = coords.size();
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = detail::euclidean_dist(coords[i].first, coords[i].second, coords[j].first,
                                       coords[j].second, kEuclideanScale);
      d[j][i] = d[i][j];
    }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return FiniteMetricSpace(std::move(labels), d);
}

// Deterministic test-fodder system: points embedded in the unit square (or a
// random tree with weighted edges), so the triangle inequality holds by
// construction, plus a random permutation.
inline DynSystem random_system(int n, std::uint64_t seed,
                               RandomMetricKind kind = RandomMetricKind::euclidean_square) {
  if (n < 1) throw BadParams("random_system requires n >= 1");
  if (n > 1000) throw BadParams("random_system supports at most 1000 points");
  if (kind == RandomMetricKind::euclidean_square) {
    if (static_cast<long long>(n) > (kCoordinateGrid + 1) * (kCoordinateGrid + 1))
      throw BadParams("too many points for the coordinate grid");
    std::mt19937_64 rng(seed);
    auto coords = detail::draw_coords(n, rng);
    return DynSystem(euclidean_space_from_coords(coords), detail::random_permutation(n, rng));
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::pair<int, Rat>>> adj(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(detail::next_below(rng, static_cast<std::uint64_t>(i)));
    const Rat w(1 + static_cast<long long>(detail::next_below(rng, kTreeScale)), kTreeScale);
    adj[static_cast<std::size_t>(i)].emplace_back(parent, w);
    adj[static_cast<std::size_t>(parent)].emplace_back(i, w);
  }
  std::vector<std::vector<Rat>> d(static_cast<std::size_t>(n),
                                  std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
  for (int src = 0; src < n; ++src) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{src};
    seen[static_cast<std::size_t>(src)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto& [v, w] : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          d[static_cast<std::size_t>(src)][static_cast<std::size_t>(v)] =
              d[static_cast<std::size_t>(src)][static_cast<std::size_t>(u)] + w;
          stack.push_back(v);
        }
    }
  }
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return DynSystem(FiniteMetricSpace(std::move(labels), d), detail::random_permutation(n, rng));
}

// ---------------------------------------------------------------------------
// Documented canonical scales. Tests and reports refer to these names instead
// of magic numbers.

struct ScalePair {
  Rat eps;
  Rat delta;
};

// Interval grid step of cantor_plus_interval; at delta >= this gap the
// interval block merges into one pseudo-orbit component.
inline Rat cantor_merge_gap(int grid) { return Rat(1, grid - 1); }

// Scales at which the identity on cantor_plus_interval reproduces the
// Cantor-minus-merge-zone shadowable set: eps = the sibling-endpoint gap
// 2/3^level, delta = the interval grid step.
inline ScalePair cantor_documented_scales(int level, int grid) {
  return ScalePair{Rat(2, detail::pow3(level)), cantor_merge_gap(grid)};
}

// Diagonal POTP probe grid for the odometer: eps = delta = 2^-j.
inline std::vector<ScalePair> odometer_potp_scales(int levels) {
  std::vector<ScalePair> out;
  for (int j = 0; j <= levels; ++j) out.push_back({Rat(1, 1LL << j), Rat(1, 1LL << j)});
  return out;
}

// Scale pairs at which Sh(f) and Sh(f^k) are observed to coincide on the
// gallery powers (checked by the acceptance suite).
inline std::vector<ScalePair> odometer_power_matched_scales(int levels) {
  std::vector<ScalePair> out;
  for (int j = 0; j < levels; ++j) out.push_back({Rat(1, 1LL << j), Rat(1, 1LL << j)});
  return out;
}

inline std::vector<ScalePair> circle_power_matched_scales(int n) {
  std::vector<ScalePair> out;
  for (int j = 1; 2 * j <= n; ++j) out.push_back({Rat(j, n), Rat(1, n)});
  return out;
}

// ---------------------------------------------------------------------------

enum class GalleryKind {
  circle_rotation,
  identity_on,
  odometer,
  cat_map,
  cantor_plus_interval,
  random_system,
};

// Parameter record for the CLI. identity_on and cantor_plus_interval both
// build the identity on the Cantor-plus-interval space (a DynSystem needs a
// map, and that space is the gallery's only bare-space generator).
struct GallerySpec {
  GalleryKind kind = GalleryKind::circle_rotation;
  int n = 0;           // circle_rotation / cat_map / random_system
  int k = 0;           // circle_rotation
  int levels = 0;      // odometer
  int level = 0;       // cantor_plus_interval
  int grid = 0;        // cantor_plus_interval
  std::uint64_t seed = 0;
  RandomMetricKind metric = RandomMetricKind::euclidean_square;
};

inline DynSystem make_gallery_system(const GallerySpec& spec) {
  switch (spec.kind) {
    case GalleryKind::circle_rotation: return circle_rotation(spec.n, spec.k);
    case GalleryKind::identity_on:
    case GalleryKind::cantor_plus_interval:
      return identity_on(cantor_plus_interval(spec.level, spec.grid));
    case GalleryKind::odometer: return odometer(spec.levels);
    case GalleryKind::cat_map: return cat_map(spec.n);
    case GalleryKind::random_system: return random_system(spec.n, spec.seed, spec.metric);
  }
  throw BadParams("unknown gallery kind");
}

}  // namespace shadowlab
