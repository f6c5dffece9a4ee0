#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "shadowlab/errors.hpp"
#include "shadowlab/metric_space.hpp"
#include "shadowlab/pointset.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

// A dynamical system at desk scale: a finite metric space together with a
// permutation of its points and the inverse permutation. Bijectivity forces
// every orbit to be purely periodic.
class DynSystem {
 public:
  DynSystem(FiniteMetricSpace space, std::vector<int> fwd)
      : space_(std::move(space)), fwd_(std::move(fwd)) {
    const std::size_t n = space_.size();
    if (fwd_.size() != n) throw NotAPermutation("map length does not match point count");
    inv_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      const int t = fwd_[i];
      if (t < 0 || static_cast<std::size_t>(t) >= n)
        throw NotAPermutation("map entry out of range at index " + std::to_string(i));
      if (inv_[static_cast<std::size_t>(t)] != -1)
        throw NotAPermutation("map repeats index " + std::to_string(t));
      inv_[static_cast<std::size_t>(t)] = static_cast<int>(i);
    }
  }

  const FiniteMetricSpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  int apply(int x) const { return fwd_[static_cast<std::size_t>(x)]; }
  int apply_inv(int x) const { return inv_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& fwd() const { return fwd_; }
  const std::vector<int>& inv() const { return inv_; }

 private:
  FiniteMetricSpace space_;
  std::vector<int> fwd_;
  std::vector<int> inv_;
};

struct Orbit {
  std::vector<int> points;  // points[0] = x, then successive images
  std::size_t period() const { return points.size(); }
};

inline Orbit orbit(const DynSystem& sys, int x) {
  Orbit o;
  int t = x;
  do {
    o.points.push_back(t);
    t = sys.apply(t);
  } while (t != x);
  return o;
}

// On permutations the omega-limit set of x is exactly its (periodic) orbit.
inline PointSet omega_limit(const DynSystem& sys, int x) {
  PointSet s(sys.size());
  for (int p : orbit(sys, x).points) s.set(static_cast<std::size_t>(p));
  return s;
}

struct PairOrbitSummary {
  Rat min_dist;
  Rat max_dist;
  long long period;  // lcm of the two cycle lengths
};

// Exact extremes of d(f^n(x), f^n(y)) over one period of (x, y) under f x f.
inline PairOrbitSummary pair_orbit_extremes(const DynSystem& sys, int x, int y) {
  const long long px = static_cast<long long>(orbit(sys, x).period());
  const long long py = static_cast<long long>(orbit(sys, y).period());
  const long long period = std::lcm(px, py);
  int a = x;
  int b = y;
  Rat lo = sys.space().dist(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  Rat hi = lo;
  for (long long t = 1; t < period; ++t) {
    a = sys.apply(a);
    b = sys.apply(b);
    const Rat& d = sys.space().dist(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    if (d < lo) lo = d;
    if (d > hi) hi = d;
  }
  return PairOrbitSummary{lo, hi, period};
}

struct DistalityMargin {
  Rat margin;
  int x;
  int y;
};

// Minimum over distinct pairs of the orbit-wise minimum distance. Always
// positive on finite bijective systems; the witness pair attains it.
inline DistalityMargin distality_margin(const DynSystem& sys) {
  if (sys.size() < 2) throw SingletonSpace("distality margin needs at least two points");
  std::optional<DistalityMargin> best;
  for (std::size_t x = 0; x < sys.size(); ++x)
    for (std::size_t y = x + 1; y < sys.size(); ++y) {
      const Rat m = pair_orbit_extremes(sys, static_cast<int>(x), static_cast<int>(y)).min_dist;
      if (!best || m < best->margin)
        best = DistalityMargin{m, static_cast<int>(x), static_cast<int>(y)};
    }
  return *best;
}

namespace detail {

// Unordered pairs with their orbit-wise max distance, sorted by current
// distance and cumulative-maxed, so threshold queries are prefix lookups.
struct PairEnvelope {
  std::vector<Rat> dist;         // ascending
  std::vector<Rat> orbit_max;    // prefix max aligned with dist
  // Largest orbit_max among pairs with dist <= t; 0 when no pair qualifies.
  Rat max_within(const Rat& t) const {
    auto it = std::upper_bound(dist.begin(), dist.end(), t);
    if (it == dist.begin()) return Rat(0);
    return orbit_max[static_cast<std::size_t>(it - dist.begin()) - 1];
  }
};

inline PairEnvelope pair_envelope(const DynSystem& sys) {
  std::vector<std::pair<Rat, Rat>> rows;
  for (std::size_t x = 0; x < sys.size(); ++x)
    for (std::size_t y = x + 1; y < sys.size(); ++y)
      rows.emplace_back(sys.space().dist(x, y),
                        pair_orbit_extremes(sys, static_cast<int>(x), static_cast<int>(y)).max_dist);
  std::sort(rows.begin(), rows.end());
  PairEnvelope env;
  env.dist.reserve(rows.size());
  env.orbit_max.reserve(rows.size());
  Rat running(0);
  for (auto& [d, m] : rows) {
    if (m > running) running = m;
    env.dist.push_back(d);
    env.orbit_max.push_back(running);
  }
  return env;
}

}  // namespace detail

// Largest candidate beta such that every pair within beta stays within alpha
// along the whole orbit of the pair. Returns 0 when no positive candidate
// qualifies (below the minimum distance).
inline Rat equicontinuity_modulus(const DynSystem& sys, const Rat& alpha) {
  if (alpha < Rat(0)) throw BadParams("alpha must be nonnegative");
  const auto env = detail::pair_envelope(sys);
  Rat best(0);
  for (const Rat& beta : distance_values(sys.space()))
    if (env.max_within(beta) <= alpha && beta > best) best = beta;
  return best;
}

// Full curve over candidate alphas, using one pair scan.
inline std::vector<std::pair<Rat, Rat>> equicontinuity_curve(const DynSystem& sys) {
  const auto env = detail::pair_envelope(sys);
  const auto cands = distance_values(sys.space());
  std::vector<std::pair<Rat, Rat>> curve;
  for (const Rat& alpha : cands) {
    Rat best(0);
    for (const Rat& beta : cands)
      if (env.max_within(beta) <= alpha && beta > best) best = beta;
    curve.emplace_back(alpha, best);
  }
  return curve;
}

enum class Direction { fwd, inv };

// One-step modulus of continuity: the largest image distance over pairs
// within t.
inline Rat continuity_modulus(const DynSystem& sys, Direction dir, const Rat& t) {
  if (t < Rat(0)) throw BadParams("threshold must be nonnegative");
  Rat best(0);
  for (std::size_t a = 0; a < sys.size(); ++a)
    for (std::size_t b = a + 1; b < sys.size(); ++b) {
      if (sys.space().dist(a, b) > t) continue;
      const int fa = dir == Direction::fwd ? sys.apply(static_cast<int>(a)) : sys.apply_inv(static_cast<int>(a));
      const int fb = dir == Direction::fwd ? sys.apply(static_cast<int>(b)) : sys.apply_inv(static_cast<int>(b));
      const Rat& d = sys.space().dist(static_cast<std::size_t>(fa), static_cast<std::size_t>(fb));
      if (d > best) best = d;
    }
  return best;
}

// Minimal k >= 1 with f^k(B[x, eps]) meeting B[x, eps]. Always exists on a
// permutation (k = period of x works), so the return-time curve is the
// informative output.
inline long long nonwandering_return(const DynSystem& sys, int x, const Rat& eps) {
  const PointSet b = ball(sys.space(), x, eps);
  PointSet s = b;
  const long long bound = static_cast<long long>(orbit(sys, x).period());
  for (long long k = 1; k <= bound; ++k) {
    s = image(s, sys.fwd());
    if (s.intersects(b)) return k;
  }
  return bound;  // unreachable: k = period always intersects
}

// Directed graph G_delta: edge u -> v iff d(f(u), v) <= delta. Every vertex
// has out-degree >= 1 (v = f(u)) and in-degree >= 1 (u = f^{-1}(v)), so every
// finite walk extends to a bi-infinite pseudo-orbit.
struct PseudoOrbitGraph {
  Rat delta;
  std::vector<std::vector<int>> out;  // sorted
};

inline PseudoOrbitGraph pseudo_orbit_graph(const DynSystem& sys, const Rat& delta) {
  if (delta < Rat(0)) throw BadParams("delta must be nonnegative");
  PseudoOrbitGraph g;
  g.delta = delta;
  g.out.resize(sys.size());
  for (std::size_t u = 0; u < sys.size(); ++u) {
    const std::size_t fu = static_cast<std::size_t>(sys.apply(static_cast<int>(u)));
    for (std::size_t v = 0; v < sys.size(); ++v)
      if (sys.space().dist(fu, v) <= delta) g.out[u].push_back(static_cast<int>(v));
  }
  return g;
}

// Sorted distinct realized values of d(f(u), v); the delta grid (0 included).
inline std::vector<Rat> delta_values(const DynSystem& sys) {
  std::vector<Rat> vals;
  for (std::size_t u = 0; u < sys.size(); ++u) {
    const std::size_t fu = static_cast<std::size_t>(sys.apply(static_cast<int>(u)));
    for (std::size_t v = 0; v < sys.size(); ++v) vals.push_back(sys.space().dist(fu, v));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

struct ChainClasses {
  std::vector<int> class_of;              // point -> class
  std::vector<std::vector<int>> classes;  // ordered by least member, members ascending
  std::vector<char> recurrent;            // per point: lies on a cycle of G_delta
};

// Strongly connected components of G_delta. On permutations every point lies
// on the cycle u -> f(u) -> ... -> u, so the recurrence flag is computed but
// always true.
inline ChainClasses chain_classes(const DynSystem& sys, const Rat& delta) {
  const PseudoOrbitGraph g = pseudo_orbit_graph(sys, delta);
  const std::size_t n = sys.size();

  // Kosaraju, iterative.
  std::vector<std::vector<int>> rin(n);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : g.out[u]) rin[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));

  std::vector<char> seen(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(s), 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < g.out[static_cast<std::size_t>(u)].size()) {
        const int v = g.out[static_cast<std::size_t>(u)][next++];
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }

  ChainClasses out;
  out.class_of.assign(n, -1);
  std::vector<std::vector<int>> raw;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (out.class_of[static_cast<std::size_t>(*it)] != -1) continue;
    const int id = static_cast<int>(raw.size());
    std::vector<int> stack{*it};
    out.class_of[static_cast<std::size_t>(*it)] = id;
    std::vector<int> members;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (int v : rin[static_cast<std::size_t>(u)])
        if (out.class_of[static_cast<std::size_t>(v)] == -1) {
          out.class_of[static_cast<std::size_t>(v)] = id;
          stack.push_back(v);
        }
    }
    std::sort(members.begin(), members.end());
    raw.push_back(std::move(members));
  }

  // Renumber classes by least member for a stable, input-independent order.
  std::vector<std::size_t> perm(raw.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return raw[a][0] < raw[b][0]; });
  out.classes.resize(raw.size());
  std::vector<int> renumber(raw.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    renumber[perm[pos]] = static_cast<int>(pos);
    out.classes[pos] = std::move(raw[perm[pos]]);
  }
  for (auto& c : out.class_of) c = renumber[static_cast<std::size_t>(c)];

  out.recurrent.assign(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : g.out[u])
      if (out.class_of[static_cast<std::size_t>(v)] == out.class_of[u]) {
        out.recurrent[u] = 1;
        break;
      }
  return out;
}

// Dense orbit on a finite model means the permutation is one n-cycle.
inline bool is_minimal(const DynSystem& sys) {
  return orbit(sys, 0).period() == sys.size();
}

namespace detail {

inline std::vector<int> perm_power(const std::vector<int>& p, long long e) {
  std::vector<int> result(p.size());
  std::iota(result.begin(), result.end(), 0);
  std::vector<int> base = p;
  while (e > 0) {
    if (e & 1) {
      std::vector<int> next(result.size());
      for (std::size_t i = 0; i < result.size(); ++i)
        next[i] = base[static_cast<std::size_t>(result[i])];
      result = std::move(next);
    }
    std::vector<int> sq(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) sq[i] = base[static_cast<std::size_t>(base[i])];
    base = std::move(sq);
    e >>= 1;
  }
  return result;
}

}  // namespace detail

// Same space, map f^k; the inverse permutation is used for negative k.
inline DynSystem power_system(const DynSystem& sys, long long k) {
  if (k == 0) throw ZeroExponent("power_system requires a nonzero exponent");
  const auto& base = k > 0 ? sys.fwd() : sys.inv();
  const long long e = k > 0 ? k : -k;
  return DynSystem(sys.space(), detail::perm_power(base, e));
}

// Order of the permutation: lcm of cycle lengths. The lcm can grow
// superexponentially in the point count, so the accumulation is checked.
inline long long perm_order(const DynSystem& sys) {
  std::vector<char> seen(sys.size(), 0);
  long long ord = 1;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    if (seen[x]) continue;
    long long len = 0;
    int t = static_cast<int>(x);
    do {
      seen[static_cast<std::size_t>(t)] = 1;
      t = sys.apply(t);
      ++len;
    } while (t != static_cast<int>(x));
    const __int128 next = static_cast<__int128>(ord / std::gcd(ord, len)) * len;
    if (next > (1LL << 62)) throw Error("permutation order exceeds the exact-arithmetic range");
    ord = static_cast<long long>(next);
  }
  return ord;
}

inline bool is_isometry(const DynSystem& sys) {
  for (std::size_t a = 0; a < sys.size(); ++a)
    for (std::size_t b = a + 1; b < sys.size(); ++b) {
      const std::size_t fa = static_cast<std::size_t>(sys.apply(static_cast<int>(a)));
      const std::size_t fb = static_cast<std::size_t>(sys.apply(static_cast<int>(b)));
      if (sys.space().dist(fa, fb) != sys.space().dist(a, b)) return false;
    }
  return true;
}

}  // namespace shadowlab
