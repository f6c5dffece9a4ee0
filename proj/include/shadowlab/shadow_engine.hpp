#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/metric_space.hpp"
#include "shadowlab/pointset.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

struct AutomatonLimits {
  std::size_t state_cap = 1'000'000;
};

// Deterministic subset automaton deciding (eps, delta)-shadowability.
//
// States pair a pseudo-orbit position u with the set S of still-viable
// tracker positions; S is always a subset of B[u, eps]. Initial states are
// (v, B[v, eps]) for every v. Each G_delta edge u -> u' induces the
// deterministic transition (u, S) -> (u', f(S) & B[u', eps]). A point x is
// excluded exactly when some reachable state at x can reach a state with
// empty S: the corresponding walk is a finite pseudo-orbit window through x
// that no orbit eps-tracks, and on a finite space that is equivalent to the
// bi-infinite definition. States with empty S are terminal sinks.
class ShadowAutomaton {
 public:
  struct State {
    int point;
    PointSet candidates;
  };

  Rat eps;
  Rat delta;
  std::vector<std::vector<int>> graph_out;  // G_delta adjacency
  std::vector<PointSet> balls;              // B[u, eps]
  std::vector<State> states;                // BFS discovery order; ids 0..n-1 are initials
  std::vector<std::vector<int>> succ;       // aligned with graph_out[state.point]
  std::vector<int> bfs_parent;              // -1 for initials
  std::vector<char> doomed;                 // can reach an empty-candidate state
  std::vector<int> doom_next;               // successor toward the empty state, -1 at sinks
  std::vector<int> doomed_rep;              // per point: first doomed state id, -1 if none

  std::size_t state_count() const { return states.size(); }

  bool point_excluded(int x) const { return doomed_rep[static_cast<std::size_t>(x)] >= 0; }

  PointSet shadowable() const {
    PointSet s = PointSet::full(doomed_rep.size());
    for (std::size_t x = 0; x < doomed_rep.size(); ++x)
      if (doomed_rep[x] >= 0) s.reset(x);
    return s;
  }

  // The first coordinates of (initial -> state -> empty), a pseudo-orbit
  // window through states[rep].point that admits no tracking orbit.
  std::vector<int> bad_window(int rep, std::size_t* center) const {
    std::vector<int> window;
    for (int s = rep; s >= 0; s = bfs_parent[static_cast<std::size_t>(s)])
      window.push_back(states[static_cast<std::size_t>(s)].point);
    std::reverse(window.begin(), window.end());
    if (center != nullptr) *center = window.size() - 1;
    for (int s = rep; !states[static_cast<std::size_t>(s)].candidates.empty();) {
      s = doom_next[static_cast<std::size_t>(s)];
      window.push_back(states[static_cast<std::size_t>(s)].point);
    }
    return window;
  }
};

namespace detail {

struct AutomatonKey {
  int point;
  PointSet set;
  bool operator==(const AutomatonKey&) const = default;
};

struct AutomatonKeyHash {
  std::size_t operator()(const AutomatonKey& k) const noexcept {
    return k.set.hash() * 1000003u + static_cast<std::size_t>(k.point);
  }
};

}  // namespace detail

inline ShadowAutomaton build_automaton(const DynSystem& sys, const Rat& eps, const Rat& delta,
                                       AutomatonLimits limits = {}) {
  const std::size_t n = sys.size();
  ShadowAutomaton a;
  a.eps = eps;
  a.delta = delta;
  a.graph_out = pseudo_orbit_graph(sys, delta).out;
  a.balls.reserve(n);
  for (std::size_t u = 0; u < n; ++u) a.balls.push_back(ball(sys.space(), static_cast<int>(u), eps));

  std::unordered_map<detail::AutomatonKey, int, detail::AutomatonKeyHash> index;
  auto intern = [&](int point, PointSet set, int parent) {
    detail::AutomatonKey key{point, std::move(set)};
    auto it = index.find(key);
    if (it != index.end()) return std::make_pair(it->second, false);
    if (a.states.size() >= limits.state_cap)
      throw StateCapExceeded(a.states.size() + 1, limits.state_cap);
    const int id = static_cast<int>(a.states.size());
    a.states.push_back(ShadowAutomaton::State{point, key.set});
    a.bfs_parent.push_back(parent);
    index.emplace(std::move(key), id);
    return std::make_pair(id, true);
  };

  for (std::size_t v = 0; v < n; ++v) intern(static_cast<int>(v), a.balls[v], -1);
  a.succ.resize(a.states.size());
  for (std::size_t head = 0; head < a.states.size(); ++head) {
    if (a.states[head].candidates.empty()) continue;  // terminal sink
    const int u = a.states[head].point;
    const PointSet shifted = image(a.states[head].candidates, sys.fwd());
    std::vector<int> row;
    row.reserve(a.graph_out[static_cast<std::size_t>(u)].size());
    for (int v : a.graph_out[static_cast<std::size_t>(u)]) {
      auto [id, fresh] =
          intern(v, shifted & a.balls[static_cast<std::size_t>(v)], static_cast<int>(head));
      if (fresh) a.succ.emplace_back();
      row.push_back(id);
    }
    a.succ[head] = std::move(row);
  }

  // Backward closure from empty-candidate states over the transition edges.
  std::vector<std::vector<int>> preds(a.states.size());
  for (std::size_t s = 0; s < a.states.size(); ++s)
    for (int t : a.succ[s]) preds[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));
  a.doomed.assign(a.states.size(), 0);
  a.doom_next.assign(a.states.size(), -1);
  std::vector<int> queue;
  for (std::size_t s = 0; s < a.states.size(); ++s)
    if (a.states[s].candidates.empty()) {
      a.doomed[s] = 1;
      queue.push_back(static_cast<int>(s));
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int q = queue[head];
    for (int p : preds[static_cast<std::size_t>(q)])
      if (!a.doomed[static_cast<std::size_t>(p)]) {
        a.doomed[static_cast<std::size_t>(p)] = 1;
        a.doom_next[static_cast<std::size_t>(p)] = q;
        queue.push_back(p);
      }
  }

  a.doomed_rep.assign(n, -1);
  for (std::size_t s = 0; s < a.states.size(); ++s)
    if (a.doomed[s] && a.doomed_rep[static_cast<std::size_t>(a.states[s].point)] < 0)
      a.doomed_rep[static_cast<std::size_t>(a.states[s].point)] = static_cast<int>(s);
  return a;
}

struct ShadowVerdict {
  int point;
  bool shadowable;
  // For negative verdicts: a pseudo-orbit window through the point with no
  // tracking orbit; window[center] == point. Empty for positive verdicts.
  std::vector<int> window;
  std::size_t center = 0;
};

// Forward constraint propagation over an explicit window. Exact for finite
// windows: returns a point whose orbit eps-tracks the walk, positioned at the
// walk's first entry, or nothing if no such orbit exists.
inline std::optional<int> lift_exists(const DynSystem& sys, const std::vector<int>& window,
                                      const Rat& eps, const Rat& delta) {
  if (window.empty()) throw BadParams("window must be nonempty");
  for (int w : window)
    if (w < 0 || static_cast<std::size_t>(w) >= sys.size()) throw BadParams("window point out of range");
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    const std::size_t fu = static_cast<std::size_t>(sys.apply(window[i]));
    if (sys.space().dist(fu, static_cast<std::size_t>(window[i + 1])) > delta)
      throw NotAWalk(i, "window breaks the delta bound at step " + std::to_string(i));
  }
  PointSet s = ball(sys.space(), window[0], eps);
  for (std::size_t i = 1; i < window.size(); ++i) {
    s = image(s, sys.fwd()) & ball(sys.space(), window[i], eps);
    if (s.empty()) return std::nullopt;
  }
  int y = s.first();
  for (std::size_t i = 1; i < window.size(); ++i) y = sys.apply_inv(y);
  return y;
}

// Memoizing front end: one automaton per (eps, delta) answers every per-point
// query at those scales. Owns a copy of the system; automata are immutable
// once built and queries are pure reads.
class ShadowEngine {
 public:
  explicit ShadowEngine(DynSystem sys, AutomatonLimits limits = {})
      : sys_(std::move(sys)), limits_(limits) {
    for (const Rat& v : delta_values(sys_))
      if (v > Rat(0)) {
        min_positive_delta_ = v;
        break;
      }
  }

  const DynSystem& system() const { return sys_; }

  const ShadowAutomaton& automaton(const Rat& eps, const Rat& delta) {
    const auto key = std::make_pair(eps, delta);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const auto capped = capped_.find(key);
      if (capped != capped_.end()) throw StateCapExceeded(capped->second, limits_.state_cap);
      try {
        it = cache_.emplace(key, build_automaton(sys_, eps, delta, limits_)).first;
      } catch (const StateCapExceeded& e) {
        capped_.emplace(key, e.states);  // remember: retrying would explode again
        throw;
      }
    }
    return it->second;
  }

  // Below the least realized d(f(u), v), G_delta is the functional graph of
  // f: pseudo-orbits are orbits and shadow themselves, so the automaton is
  // skipped.
  bool trivially_all_shadowable(const Rat& delta) const {
    return !min_positive_delta_ || delta < *min_positive_delta_;
  }

  PointSet shadowable_points(const Rat& eps, const Rat& delta) {
    if (eps < Rat(0) || delta < Rat(0)) throw BadParams("scales must be nonnegative");
    if (trivially_all_shadowable(delta)) return PointSet::full(sys_.size());
    return automaton(eps, delta).shadowable();
  }

  ShadowVerdict is_shadowable(int x, const Rat& eps, const Rat& delta) {
    if (x < 0 || static_cast<std::size_t>(x) >= sys_.size()) throw BadParams("point out of range");
    if (trivially_all_shadowable(delta)) return ShadowVerdict{x, true, {}, 0};
    const ShadowAutomaton& a = automaton(eps, delta);
    if (!a.point_excluded(x)) return ShadowVerdict{x, true, {}, 0};
    ShadowVerdict v{x, false, {}, 0};
    v.window = a.bad_window(a.doomed_rep[static_cast<std::size_t>(x)], &v.center);
    return v;
  }

  bool shadowable_through_set(const PointSet& k, const Rat& eps, const Rat& delta) {
    if (k.empty()) throw EmptyArgument("through-set must be nonempty");
    const PointSet sh = shadowable_points(eps, delta);
    return k.is_subset_of(sh);
  }

  // Largest delta in the probe grid at which x stays shadowable; 0 when only
  // delta = 0 works. The probe grid is the realized delta values plus the
  // query eps itself (capped at the largest realized value), so a verdict
  // that holds at the query's own scale is never lost to grid rounding.
  Rat pointwise_modulus(int x, const Rat& eps) {
    for (const Rat& d : modulus_probe_grid(eps)) {
      if (shadowable_points(eps, d).test(static_cast<std::size_t>(x))) return d;
    }
    return Rat(0);
  }

  Rat potp_modulus(const Rat& eps) {
    const std::size_t n = sys_.size();
    for (const Rat& d : modulus_probe_grid(eps)) {
      if (shadowable_points(eps, d).count() == n) return d;
    }
    return Rat(0);
  }

 private:
  std::vector<Rat> modulus_probe_grid(const Rat& eps) const {
    std::vector<Rat> grid = delta_values(sys_);
    const Rat probe = std::min(eps, grid.back());
    if (!std::binary_search(grid.begin(), grid.end(), probe)) {
      grid.insert(std::upper_bound(grid.begin(), grid.end(), probe), probe);
    }
    std::reverse(grid.begin(), grid.end());  // descending: first hit is the largest
    return grid;
  }

  DynSystem sys_;
  AutomatonLimits limits_;
  std::optional<Rat> min_positive_delta_;
  std::map<std::pair<Rat, Rat>, ShadowAutomaton> cache_;
  std::map<std::pair<Rat, Rat>, std::size_t> capped_;
};

inline PointSet shadowable_points(const DynSystem& sys, const Rat& eps, const Rat& delta,
                                  AutomatonLimits limits = {}) {
  ShadowEngine e(sys, limits);
  return e.shadowable_points(eps, delta);
}

inline ShadowVerdict is_shadowable(const DynSystem& sys, int x, const Rat& eps, const Rat& delta,
                                   AutomatonLimits limits = {}) {
  ShadowEngine e(sys, limits);
  return e.is_shadowable(x, eps, delta);
}

inline bool shadowable_through_set(const DynSystem& sys, const PointSet& k, const Rat& eps,
                                   const Rat& delta, AutomatonLimits limits = {}) {
  ShadowEngine e(sys, limits);
  return e.shadowable_through_set(k, eps, delta);
}

inline Rat pointwise_modulus(const DynSystem& sys, int x, const Rat& eps,
                             AutomatonLimits limits = {}) {
  ShadowEngine e(sys, limits);
  return e.pointwise_modulus(x, eps);
}

inline Rat potp_modulus(const DynSystem& sys, const Rat& eps, AutomatonLimits limits = {}) {
  ShadowEngine e(sys, limits);
  return e.potp_modulus(eps);
}

struct PeriodicTrackerResult {
  long long k;
  int y;
};

// First (k, y) whose whole f^k-orbit stays in B[z, eps]. k runs over the
// divisors of the permutation order in increasing order; y runs over
// B[z, eps] by increasing distance from z, ties by index. k = order with
// y = z always qualifies on a permutation, so the search cannot fail; the
// minimum k is informative. The delta argument mirrors the scale pair the
// callers reason with and does not affect the search.
inline std::optional<PeriodicTrackerResult> periodic_tracker(const DynSystem& sys, int z,
                                                             const Rat& eps, const Rat& /*delta*/) {
  if (z < 0 || static_cast<std::size_t>(z) >= sys.size()) throw BadParams("point out of range");
  const PointSet b = ball(sys.space(), z, eps);
  std::vector<int> candidates = b.members();
  std::sort(candidates.begin(), candidates.end(), [&](int l, int r) {
    const Rat& dl = sys.space().dist(static_cast<std::size_t>(z), static_cast<std::size_t>(l));
    const Rat& dr = sys.space().dist(static_cast<std::size_t>(z), static_cast<std::size_t>(r));
    return dl != dr ? dl < dr : l < r;
  });
  const long long ord = perm_order(sys);
  std::vector<long long> ks;
  for (long long k = 1; k <= ord; ++k)
    if (ord % k == 0) ks.push_back(k);
  for (long long k : ks) {
    const std::vector<int> fk = detail::perm_power(sys.fwd(), k);
    for (int y : candidates) {
      bool ok = true;
      int t = y;
      do {
        if (!b.test(static_cast<std::size_t>(t))) {
          ok = false;
          break;
        }
        t = fk[static_cast<std::size_t>(t)];
      } while (t != y);
      if (ok) return PeriodicTrackerResult{k, y};
    }
  }
  return std::nullopt;  // unreachable on permutations
}

struct CertificateTrace {
  Rat eps_prime;    // pairs within eps_prime stay within eps along all orbits
  Rat gap;          // proximity gap at which the region is p's component
  Rat region_diameter;
  Rat separation;   // dist(region, complement); > delta_prime
  Rat delta_prime;  // pairs within the certified delta stay within delta_prime
};

struct ClopenCertificate {
  Rat delta;
  PointSet region;
  CertificateTrace trace;
};

// Constructive finite-scale run of the separated-region argument: find an
// all-time modulus eps' for eps, take the region U as p's component at the
// largest gap keeping diam(U) <= eps', separate it from the rest, and pick
// delta so one-step pseudo-orbit noise can never carry the pulled-back orbit
// across the separation. Every delta-pseudo-orbit through p then satisfies
// f^{-n}(xi_n) in U for all n, hence is eps-shadowed by the orbit of p.
// Returns nothing when no positive delta is certifiable at these scales.
inline std::optional<ClopenCertificate> clopen_shadow_certificate(const DynSystem& sys, int p,
                                                                  const Rat& eps) {
  if (p < 0 || static_cast<std::size_t>(p) >= sys.size()) throw BadParams("point out of range");
  if (eps < Rat(0)) throw BadParams("eps must be nonnegative");
  const std::size_t n = sys.size();
  if (n == 1) {
    PointSet u(1);
    u.set(0);
    return ClopenCertificate{eps, u, CertificateTrace{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)}};
  }

  const Rat eps_prime = equicontinuity_modulus(sys, eps);
  const auto gaps = distance_values(sys.space());

  std::optional<Rat> best_gap;
  PointSet region(n);
  for (const Rat& gap : gaps) {
    const Partition part = components(sys.space(), gap);
    const auto& comp =
        part.classes[static_cast<std::size_t>(part.class_of[static_cast<std::size_t>(p)])];
    if (comp.size() == n) continue;  // no complement to separate from
    PointSet candidate(n);
    for (int m : comp) candidate.set(static_cast<std::size_t>(m));
    if (diameter(sys.space(), candidate) <= eps_prime) {
      best_gap = gap;
      region = candidate;
    }
  }
  if (!best_gap) return std::nullopt;

  const Rat separation = set_distance(sys.space(), region, region.complement());
  Rat delta_prime(0);
  for (const Rat& v : gaps)
    if (v > Rat(0) && v < separation) delta_prime = v;
  if (delta_prime == Rat(0)) return std::nullopt;

  const Rat delta = equicontinuity_modulus(sys, delta_prime);
  if (delta == Rat(0)) return std::nullopt;

  return ClopenCertificate{
      delta, region,
      CertificateTrace{eps_prime, *best_gap, diameter(sys.space(), region), separation,
                       delta_prime}};
}

// Re-verifies a certificate from scratch: the two modulus inequalities by
// direct pair scans, the separation strictly exceeding delta_prime, and the
// containment claim itself by propagating reachable pseudo-orbit positions
// through G_delta in both directions, pulled back to time zero, until the
// (set, shift) state repeats.
inline bool check_certificate(const DynSystem& sys, int p, const Rat& eps,
                              const ClopenCertificate& cert) {
  const std::size_t n = sys.size();
  if (n == 1) return cert.region.test(0);
  if (!cert.region.test(static_cast<std::size_t>(p))) return false;
  if (cert.region.complement().empty()) return false;
  if (diameter(sys.space(), cert.region) > cert.trace.eps_prime) return false;
  if (cert.trace.delta_prime <= Rat(0)) return false;
  if (set_distance(sys.space(), cert.region, cert.region.complement()) <= cert.trace.delta_prime)
    return false;

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Rat& d = sys.space().dist(a, b);
      if (d <= cert.trace.eps_prime &&
          pair_orbit_extremes(sys, static_cast<int>(a), static_cast<int>(b)).max_dist > eps)
        return false;
      if (d <= cert.delta &&
          pair_orbit_extremes(sys, static_cast<int>(a), static_cast<int>(b)).max_dist >
              cert.trace.delta_prime)
        return false;
    }

  const auto out = pseudo_orbit_graph(sys, cert.delta).out;
  std::vector<std::vector<int>> in(n);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : out[u]) in[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
  const long long ord = perm_order(sys);

  const auto propagate = [&](bool forward) {
    PointSet reach(n);
    reach.set(static_cast<std::size_t>(p));
    std::map<std::pair<std::vector<int>, long long>, bool> visited;
    long long shift = 0;
    for (std::size_t guard = 0; guard < 100000; ++guard) {
      const auto key = std::make_pair(reach.members(), shift % ord);
      if (visited.count(key)) return true;  // state repeats: all future checks repeat too
      visited[key] = true;
      PointSet next(n);
      for (int u : reach.members())
        for (int v : forward ? out[static_cast<std::size_t>(u)] : in[static_cast<std::size_t>(u)])
          next.set(static_cast<std::size_t>(v));
      reach = next;
      shift += 1;
      PointSet pulled = reach;
      for (long long t = 0; t < shift % ord; ++t)
        pulled = image(pulled, forward ? sys.inv() : sys.fwd());
      if (!pulled.is_subset_of(cert.region)) return false;
    }
    return false;  // guard tripped; treat as unverified
  };
  return propagate(true) && propagate(false);
}

}  // namespace shadowlab
