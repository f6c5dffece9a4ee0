#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/pointset.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

// Exhaustive windowed oracle for shadowability, kept independent of the
// subset-automaton engine: it builds its own balls and edge tests with direct
// loops, enumerates centered windows through the query point (all backward
// prefixes, then all forward suffixes, each up to half-width max_window), and
// confirms any bad window it finds against the raw definition by trying every
// candidate tracking orbit.
//
// Enumeration prunes only exact repeats of a sufficient statistic: for a
// backward prefix, (left endpoint, lift set pulled to the query point's time
// frame, depth mod permutation order); for a forward suffix, (endpoint,
// current lift set). Two windows agreeing on the statistic have identical
// extensions, so the pruning is lossless. When max_window is at least the
// subset-automaton state count at the same scales, the verdict is exact;
// below that it is a sound non-shadowability detector only.

struct OracleOptions {
  std::size_t step_budget = 8'000'000;  // window extension steps before ExplosionGuard
};

struct OracleResult {
  bool shadowable;
  std::vector<int> bad_window;  // empty when shadowable
  std::size_t center = 0;       // index of the query point in bad_window
};

namespace oracle_detail {

struct Key {
  int point;
  long long residue;
  PointSet set;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    return k.set.hash() * 131 + static_cast<std::size_t>(k.point) * 1000003u +
           static_cast<std::size_t>(k.residue);
  }
};

}  // namespace oracle_detail

inline OracleResult oracle_analyze(const DynSystem& sys, int x, const Rat& eps, const Rat& delta,
                                   std::size_t max_window, OracleOptions opts = {}) {
  if (x < 0 || static_cast<std::size_t>(x) >= sys.size()) throw BadParams("point out of range");
  if (eps < Rat(0) || delta < Rat(0)) throw BadParams("scales must be nonnegative");
  if (max_window < 1) throw BadParams("max_window must be at least 1");
  const std::size_t n = sys.size();

  std::vector<PointSet> balls(n, PointSet(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (sys.space().dist(u, v) <= eps) balls[u].set(v);
  std::vector<std::vector<int>> out(n);
  std::vector<std::vector<int>> in(n);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t fu = static_cast<std::size_t>(sys.apply(static_cast<int>(u)));
    for (std::size_t v = 0; v < n; ++v)
      if (sys.space().dist(fu, v) <= delta) {
        out[u].push_back(static_cast<int>(v));
        in[v].push_back(static_cast<int>(u));
      }
  }
  const long long ord = perm_order(sys);
  std::size_t steps = 0;
  const auto spend = [&](std::size_t cost) {
    steps += cost;
    if (steps > opts.step_budget) throw ExplosionGuard(steps, opts.step_budget);
  };

  // A window w_0..w_L is bad iff no z tracks it: d(f^i(z), w_i) <= eps for
  // all i. This is the definition, checked verbatim.
  const auto verify_bad = [&](const std::vector<int>& window) {
    for (std::size_t z = 0; z < n; ++z) {
      int t = static_cast<int>(z);
      bool tracks = true;
      for (int w : window) {
        if (sys.space().dist(static_cast<std::size_t>(t), static_cast<std::size_t>(w)) > eps) {
          tracks = false;
          break;
        }
        t = sys.apply(t);
      }
      if (tracks) return false;
    }
    return true;
  };

  // Backward phase. State: left endpoint w, lift set P of the prefix
  // w -> ... -> x expressed at x's time frame, P = intersection over offsets
  // t of f^t(B[w_{-t}, eps]).
  struct BState {
    int w;
    PointSet p;
    int parent;
  };
  std::vector<BState> bstates;
  std::unordered_set<oracle_detail::Key, oracle_detail::KeyHash> bvisited;
  std::vector<PointSet> lift_sets;           // distinct P values, discovery order
  std::vector<int> lift_rep;                 // representative bstate per lift set
  std::unordered_set<PointSet, PointSetHash> lift_seen;

  const auto backward_walk = [&](int state) {
    std::vector<int> window;
    for (int s = state; s >= 0; s = bstates[static_cast<std::size_t>(s)].parent)
      window.push_back(bstates[static_cast<std::size_t>(s)].w);
    return window;  // already left-to-right: deepest prefix point first
  };

  const auto conclude_bad = [&](std::vector<int> window, std::size_t center) {
    if (!verify_bad(window))
      throw std::logic_error("oracle found a window that the definition accepts");
    return OracleResult{false, std::move(window), center};
  };

  bstates.push_back(BState{x, balls[static_cast<std::size_t>(x)], -1});
  bvisited.insert(oracle_detail::Key{x, 0, balls[static_cast<std::size_t>(x)]});
  lift_sets.push_back(balls[static_cast<std::size_t>(x)]);
  lift_rep.push_back(0);
  lift_seen.insert(balls[static_cast<std::size_t>(x)]);

  std::vector<PointSet> shifted = balls;  // f^{j+1}(B[.]) while expanding level j
  for (auto& s : shifted) s = image(s, sys.fwd());

  std::size_t lo = 0;
  std::size_t hi = bstates.size();
  for (std::size_t depth = 0; depth < max_window && lo < hi; ++depth) {
    for (std::size_t s = lo; s < hi; ++s) {
      for (int w : in[static_cast<std::size_t>(bstates[s].w)]) {
        spend(1);
        PointSet p = bstates[s].p & shifted[static_cast<std::size_t>(w)];
        oracle_detail::Key key{w, static_cast<long long>((depth + 1) % static_cast<std::size_t>(ord)),
                               p};
        if (bvisited.count(key)) continue;
        bvisited.insert(key);
        bstates.push_back(BState{w, p, static_cast<int>(s)});
        if (p.empty()) {
          // Bad already with an empty forward half.
          auto window = backward_walk(static_cast<int>(bstates.size() - 1));
          const std::size_t center = window.size() - 1;
          return conclude_bad(std::move(window), center);
        }
        if (!lift_seen.count(p)) {
          lift_seen.insert(p);
          lift_sets.push_back(p);
          lift_rep.push_back(static_cast<int>(bstates.size() - 1));
        }
      }
    }
    lo = hi;
    hi = bstates.size();
    for (auto& sset : shifted) sset = image(sset, sys.fwd());
  }

  // Forward phase: multi-source BFS over (endpoint, lift set), one source per
  // distinct prefix lift set, all rooted at x.
  struct FState {
    int u;
    PointSet v;
    int parent;
    int seed;  // index into lift_sets
  };
  std::vector<FState> fstates;
  std::unordered_set<oracle_detail::Key, oracle_detail::KeyHash> fvisited;
  for (std::size_t i = 0; i < lift_sets.size(); ++i) {
    oracle_detail::Key key{x, 0, lift_sets[i]};
    if (fvisited.count(key)) continue;
    fvisited.insert(key);
    fstates.push_back(FState{x, lift_sets[i], -1, static_cast<int>(i)});
  }

  const auto full_window = [&](int fstate) {
    std::vector<int> fwd_part;
    int seed = 0;
    for (int s = fstate; s >= 0; s = fstates[static_cast<std::size_t>(s)].parent) {
      fwd_part.push_back(fstates[static_cast<std::size_t>(s)].u);
      seed = fstates[static_cast<std::size_t>(s)].seed;
    }
    std::reverse(fwd_part.begin(), fwd_part.end());  // x, u_1, ..., u_b
    std::vector<int> window = backward_walk(lift_rep[static_cast<std::size_t>(seed)]);
    const std::size_t center = window.size() - 1;
    window.insert(window.end(), fwd_part.begin() + 1, fwd_part.end());
    return std::make_pair(window, center);
  };

  lo = 0;
  hi = fstates.size();
  for (std::size_t depth = 0; depth < max_window && lo < hi; ++depth) {
    for (std::size_t s = lo; s < hi; ++s) {
      const PointSet pushed = image(fstates[s].v, sys.fwd());
      for (int v : out[static_cast<std::size_t>(fstates[s].u)]) {
        spend(1);
        PointSet next = pushed & balls[static_cast<std::size_t>(v)];
        oracle_detail::Key key{v, 0, next};
        if (fvisited.count(key)) continue;
        fvisited.insert(key);
        fstates.push_back(FState{v, next, static_cast<int>(s), fstates[s].seed});
        if (next.empty()) {
          auto [window, center] = full_window(static_cast<int>(fstates.size() - 1));
          return conclude_bad(std::move(window), center);
        }
      }
    }
    lo = hi;
    hi = fstates.size();
  }

  return OracleResult{true, {}, 0};
}

inline bool oracle_shadowable(const DynSystem& sys, int x, const Rat& eps, const Rat& delta,
                              std::size_t max_window, OracleOptions opts = {}) {
  return oracle_analyze(sys, x, eps, delta, max_window, opts).shadowable;
}

}  // namespace shadowlab
