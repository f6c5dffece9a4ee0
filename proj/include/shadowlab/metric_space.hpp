#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shadowlab/errors.hpp"
#include "shadowlab/pointset.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

enum class MetricViolationKind {
  NotSquare,
  NonzeroDiagonal,
  NegativeOrZeroOffDiagonal,
  NonSymmetric,
  TriangleViolation,
};

// First defect found by the validator, with the offending indices.
// For TriangleViolation the triple (i, j, k) means dist[i][k] > dist[i][j] + dist[j][k].
struct MetricViolation {
  MetricViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  const char* name() const {
    switch (kind) {
      case MetricViolationKind::NotSquare: return "NotSquare";
      case MetricViolationKind::NonzeroDiagonal: return "NonzeroDiagonal";
      case MetricViolationKind::NegativeOrZeroOffDiagonal: return "NegativeOrZeroOffDiagonal";
      case MetricViolationKind::NonSymmetric: return "NonSymmetric";
      case MetricViolationKind::TriangleViolation: return "TriangleViolation";
    }
    return "Unknown";
  }

  std::string message() const {
    switch (kind) {
      case MetricViolationKind::NotSquare:
        return "row " + std::to_string(i) + " has the wrong length";
      case MetricViolationKind::NonzeroDiagonal:
        return "dist[" + std::to_string(i) + "][" + std::to_string(i) + "] is not zero";
      case MetricViolationKind::NegativeOrZeroOffDiagonal:
        return "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] is not positive";
      case MetricViolationKind::NonSymmetric:
        return "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] != dist[" +
               std::to_string(j) + "][" + std::to_string(i) + "]";
      case MetricViolationKind::TriangleViolation:
        return "dist[" + std::to_string(i) + "][" + std::to_string(k) + "] > dist[" +
               std::to_string(i) + "][" + std::to_string(j) + "] + dist[" + std::to_string(j) +
               "][" + std::to_string(k) + "]";
    }
    return "unknown violation";
  }
};

struct InvalidMetric : Error {
  explicit InvalidMetric(MetricViolation v) : Error(v.message()), violation(v) {}
  MetricViolation violation;
};

// Scan order is fixed so "first violation" is well defined: row shapes,
// diagonal, off-diagonal positivity (row major), symmetry (i < j), then
// triangles in lexicographic (i, j, k) order.
inline std::optional<MetricViolation> find_metric_violation(
    const std::vector<std::vector<Rat>>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    if (m[i].size() != n)
      return MetricViolation{MetricViolationKind::NotSquare, i, 0, 0};
  for (std::size_t i = 0; i < n; ++i)
    if (m[i][i] != Rat(0))
      return MetricViolation{MetricViolationKind::NonzeroDiagonal, i, i, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m[i][j] <= Rat(0))
        return MetricViolation{MetricViolationKind::NegativeOrZeroOffDiagonal, i, j, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != m[j][i])
        return MetricViolation{MetricViolationKind::NonSymmetric, i, j, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (m[i][k] > m[i][j] + m[j][k])
          return MetricViolation{MetricViolationKind::TriangleViolation, i, j, k};
      }
    }
  return std::nullopt;
}

// A finite metric space with exact rational distances. Immutable after
// construction; every operation below is a pure function of it.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, const std::vector<std::vector<Rat>>& dist)
      : labels_(std::move(labels)), n_(labels_.size()) {
    if (dist.size() != n_) throw BadParams("label count does not match matrix size");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (labels_[i] == labels_[j]) throw BadParams("duplicate point label: " + labels_[i]);
    if (auto v = find_metric_violation(dist)) throw InvalidMetric(*v);
    d_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) d_[i * n_ + j] = dist[i][j];
  }

  std::size_t size() const { return n_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rat& dist(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  std::optional<int> find_label(std::string_view name) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (labels_[i] == name) return static_cast<int>(i);
    return std::nullopt;
  }

 private:
  std::vector<std::string> labels_;
  std::size_t n_;
  std::vector<Rat> d_;
};

// Default labels "0", "1", ... for spaces defined by a bare matrix.
inline FiniteMetricSpace make_metric_space(const std::vector<std::vector<Rat>>& dist) {
  std::vector<std::string> labels;
  labels.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) labels.push_back(std::to_string(i));
  return FiniteMetricSpace(std::move(labels), dist);
}

// Closed ball {y : d(x, y) <= r}; always contains x for r >= 0.
inline PointSet ball(const FiniteMetricSpace& space, int x, const Rat& r) {
  if (x < 0 || static_cast<std::size_t>(x) >= space.size()) throw BadParams("point out of range");
  if (r < Rat(0)) throw BadParams("ball radius must be nonnegative");
  PointSet s(space.size());
  for (std::size_t y = 0; y < space.size(); ++y)
    if (space.dist(static_cast<std::size_t>(x), y) <= r) s.set(y);
  return s;
}

// Undirected adjacency: edge {u, v} iff u != v and d(u, v) <= gap.
inline std::vector<std::vector<int>> proximity_graph(const FiniteMetricSpace& space,
                                                     const Rat& gap) {
  if (gap < Rat(0)) throw BadParams("gap must be nonnegative");
  std::vector<std::vector<int>> adj(space.size());
  for (std::size_t u = 0; u < space.size(); ++u)
    for (std::size_t v = u + 1; v < space.size(); ++v)
      if (space.dist(u, v) <= gap) {
        adj[u].push_back(static_cast<int>(v));
        adj[v].push_back(static_cast<int>(u));
      }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

struct Partition {
  std::vector<int> class_of;              // point -> class index
  std::vector<std::vector<int>> classes;  // ascending members, classes ordered by least member
};

inline Partition components(const FiniteMetricSpace& space, const Rat& gap) {
  const auto adj = proximity_graph(space, gap);
  Partition p;
  p.class_of.assign(space.size(), -1);
  for (std::size_t start = 0; start < space.size(); ++start) {
    if (p.class_of[start] != -1) continue;
    const int id = static_cast<int>(p.classes.size());
    std::vector<int> queue{static_cast<int>(start)};
    p.class_of[start] = id;
    std::vector<int> members;
    while (!queue.empty()) {
      int u = queue.back();
      queue.pop_back();
      members.push_back(u);
      for (int v : adj[static_cast<std::size_t>(u)])
        if (p.class_of[static_cast<std::size_t>(v)] == -1) {
          p.class_of[static_cast<std::size_t>(v)] = id;
          queue.push_back(v);
        }
    }
    std::sort(members.begin(), members.end());
    p.classes.push_back(std::move(members));
  }
  return p;
}

// Points whose gap-component is a singleton: the finite-scale analog of the
// set where the space is totally disconnected.
inline PointSet deg_points(const FiniteMetricSpace& space, const Rat& gap) {
  const Partition p = components(space, gap);
  PointSet s(space.size());
  for (std::size_t x = 0; x < space.size(); ++x)
    if (p.classes[static_cast<std::size_t>(p.class_of[x])].size() == 1) s.set(x);
  return s;
}

inline Rat set_distance(const FiniteMetricSpace& space, const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw EmptyArgument("set_distance requires nonempty sets");
  std::optional<Rat> best;
  for (int x : a.members())
    for (int y : b.members()) {
      const Rat& d = space.dist(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      if (!best || d < *best) best = d;
    }
  return *best;
}

inline Rat diameter(const FiniteMetricSpace& space, const PointSet& a) {
  if (a.empty()) throw EmptyArgument("diameter requires a nonempty set");
  Rat best(0);
  const auto pts = a.members();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Rat& d = space.dist(static_cast<std::size_t>(pts[i]), static_cast<std::size_t>(pts[j]));
      if (d > best) best = d;
    }
  return best;
}

inline Rat diameter(const FiniteMetricSpace& space) {
  return diameter(space, PointSet::full(space.size()));
}

// Sorted distinct entries of the distance matrix (0 included). Any
// epsilon-dependent answer is piecewise constant between consecutive values,
// so sweeps iterate exactly this set.
inline std::vector<Rat> distance_values(const FiniteMetricSpace& space) {
  std::vector<Rat> vals;
  vals.push_back(Rat(0));
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) vals.push_back(space.dist(i, j));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace shadowlab
