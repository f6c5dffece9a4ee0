#pragma once

#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/gallery.hpp"
#include "shadowlab/metric_space.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

// On-disk system description. Metric variants:
//   matrix:   integer entries over a shared scale_denominator
//   euclidean: rational coordinate pairs; distances are recomputed on load by
//              rounding each Euclidean norm up onto the 1/kEuclideanScale grid
//   circle:   the n-point circle metric
//   two_adic: the first-differing-bit metric on 2^levels points
// The map field is the permutation as an index list. Rationals serialize as
// "p/q" strings, never floats.
struct SystemFile {
  enum class MetricKind { matrix, euclidean, circle, two_adic };

  std::string name;
  std::vector<std::string> points;
  MetricKind kind = MetricKind::matrix;
  long long scale_denominator = 1;
  std::vector<std::vector<long long>> entries;
  std::vector<std::pair<Rat, Rat>> coords;
  int circle_n = 0;
  int levels = 0;
  std::vector<int> map;
};

namespace io_detail {

inline Rat require_rat(const nlohmann::json& j, const std::string& context) {
  if (!j.is_string()) throw ParseError(context + ": expected a \"p/q\" string");
  auto r = parse_rat(j.get<std::string>());
  if (!r) throw ParseError(context + ": cannot parse rational '" + j.get<std::string>() + "'");
  return *r;
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

}  // namespace io_detail

inline SystemFile parse_system_json(const nlohmann::json& j) {
  using nlohmann::json;
  SystemFile f;
  if (!j.is_object()) throw ParseError("system file must be a JSON object");
  f.name = io_detail::require_field(j, "name").get<std::string>();
  for (const auto& p : io_detail::require_field(j, "points"))
    f.points.push_back(p.get<std::string>());
  const json& metric = io_detail::require_field(j, "metric");
  const std::string kind = io_detail::require_field(metric, "kind").get<std::string>();
  if (kind == "matrix") {
    f.kind = SystemFile::MetricKind::matrix;
    f.scale_denominator = io_detail::require_field(metric, "scale_denominator").get<long long>();
    if (f.scale_denominator <= 0) throw ParseError("scale_denominator must be positive");
    for (const auto& row : io_detail::require_field(metric, "entries")) {
      std::vector<long long> r;
      for (const auto& e : row) r.push_back(e.get<long long>());
      f.entries.push_back(std::move(r));
    }
  } else if (kind == "euclidean") {
    f.kind = SystemFile::MetricKind::euclidean;
    for (const auto& pair : io_detail::require_field(metric, "coords")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("euclidean coords must be [x, y] pairs");
      f.coords.emplace_back(io_detail::require_rat(pair[0], "coords"),
                            io_detail::require_rat(pair[1], "coords"));
    }
  } else if (kind == "circle") {
    f.kind = SystemFile::MetricKind::circle;
    f.circle_n = io_detail::require_field(metric, "n").get<int>();
  } else if (kind == "two_adic") {
    f.kind = SystemFile::MetricKind::two_adic;
    f.levels = io_detail::require_field(metric, "levels").get<int>();
  } else {
    throw ParseError("unknown metric kind '" + kind + "'");
  }
  for (const auto& m : io_detail::require_field(j, "map")) f.map.push_back(m.get<int>());
  return f;
}

inline nlohmann::ordered_json to_json(const SystemFile& f) {
  nlohmann::ordered_json j;
  j["name"] = f.name;
  j["points"] = f.points;
  nlohmann::ordered_json metric;
  switch (f.kind) {
    case SystemFile::MetricKind::matrix:
      metric["kind"] = "matrix";
      metric["scale_denominator"] = f.scale_denominator;
      metric["entries"] = f.entries;
      break;
    case SystemFile::MetricKind::euclidean: {
      metric["kind"] = "euclidean";
      nlohmann::ordered_json coords = nlohmann::ordered_json::array();
      for (const auto& [x, y] : f.coords)
        coords.push_back({to_string(x), to_string(y)});
      metric["coords"] = std::move(coords);
      break;
    }
    case SystemFile::MetricKind::circle:
      metric["kind"] = "circle";
      metric["n"] = f.circle_n;
      break;
    case SystemFile::MetricKind::two_adic:
      metric["kind"] = "two_adic";
      metric["levels"] = f.levels;
      break;
  }
  j["metric"] = std::move(metric);
  j["map"] = f.map;
  return j;
}

inline SystemFile read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_system_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed system file: ") + e.what());
  }
}

inline void write_system_file(const std::string& path, const SystemFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << to_json(f).dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

// Decodes the metric, validates it, and builds the system. Matrix and
// euclidean metrics go through the full validator; circle and two_adic are
// valid by construction.
inline DynSystem decode_system(const SystemFile& f) {
  if (f.points.empty()) throw ParseError("system has no points");
  switch (f.kind) {
    case SystemFile::MetricKind::matrix: {
      if (f.entries.size() != f.points.size())
        throw ParseError("matrix size does not match point count");
      std::vector<std::vector<Rat>> d(f.entries.size());
      for (std::size_t i = 0; i < f.entries.size(); ++i) {
        if (f.entries[i].size() != f.points.size())
          throw ParseError("matrix row " + std::to_string(i) + " has the wrong length");
        for (long long e : f.entries[i]) d[i].emplace_back(e, f.scale_denominator);
      }
      return DynSystem(FiniteMetricSpace(f.points, d), f.map);
    }
    case SystemFile::MetricKind::euclidean: {
      if (f.coords.size() != f.points.size())
        throw ParseError("coords size does not match point count");
      FiniteMetricSpace space = euclidean_space_from_coords(f.coords);
      return DynSystem(FiniteMetricSpace(f.points, [&] {
                         std::vector<std::vector<Rat>> d(space.size(),
                                                         std::vector<Rat>(space.size()));
                         for (std::size_t i = 0; i < space.size(); ++i)
                           for (std::size_t j = 0; j < space.size(); ++j) d[i][j] = space.dist(i, j);
                         return d;
                       }()),
                       f.map);
    }
    case SystemFile::MetricKind::circle: {
      if (f.circle_n < 2 || static_cast<std::size_t>(f.circle_n) != f.points.size())
        throw ParseError("circle n does not match point count");
      const DynSystem base = circle_rotation(f.circle_n, 0);
      std::vector<std::vector<Rat>> d(f.points.size(), std::vector<Rat>(f.points.size()));
      for (std::size_t i = 0; i < f.points.size(); ++i)
        for (std::size_t j = 0; j < f.points.size(); ++j) d[i][j] = base.space().dist(i, j);
      return DynSystem(FiniteMetricSpace(f.points, d), f.map);
    }
    case SystemFile::MetricKind::two_adic: {
      if (f.levels < 1 || (std::size_t{1} << f.levels) != f.points.size())
        throw ParseError("two_adic levels do not match point count");
      const DynSystem base = odometer(f.levels);
      std::vector<std::vector<Rat>> d(f.points.size(), std::vector<Rat>(f.points.size()));
      for (std::size_t i = 0; i < f.points.size(); ++i)
        for (std::size_t j = 0; j < f.points.size(); ++j) d[i][j] = base.space().dist(i, j);
      return DynSystem(FiniteMetricSpace(f.points, d), f.map);
    }
  }
  throw ParseError("unknown metric kind");
}

// Common denominator encoding of an arbitrary exact metric.
inline SystemFile encode_matrix_system(const DynSystem& sys, std::string name) {
  SystemFile f;
  f.name = std::move(name);
  f.points = sys.space().labels();
  f.kind = SystemFile::MetricKind::matrix;
  long long common = 1;
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.size(); ++j)
      common = std::lcm(common, sys.space().dist(i, j).denominator());
  f.scale_denominator = common;
  f.entries.resize(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.size(); ++j) {
      const Rat& d = sys.space().dist(i, j);
      f.entries[i].push_back(d.numerator() * (common / d.denominator()));
    }
  f.map = sys.fwd();
  return f;
}

inline SystemFile encode_gallery_system(const GallerySpec& spec) {
  switch (spec.kind) {
    case GalleryKind::circle_rotation: {
      const DynSystem sys = circle_rotation(spec.n, spec.k);
      SystemFile f;
      f.name = "circle" + std::to_string(spec.n) + "_rot" + std::to_string(spec.k);
      f.points = sys.space().labels();
      f.kind = SystemFile::MetricKind::circle;
      f.circle_n = spec.n;
      f.map = sys.fwd();
      return f;
    }
    case GalleryKind::odometer: {
      const DynSystem sys = odometer(spec.levels);
      SystemFile f;
      f.name = "odometer" + std::to_string(spec.levels);
      f.points = sys.space().labels();
      f.kind = SystemFile::MetricKind::two_adic;
      f.levels = spec.levels;
      f.map = sys.fwd();
      return f;
    }
    case GalleryKind::cat_map:
      return encode_matrix_system(cat_map(spec.n), "cat" + std::to_string(spec.n));
    case GalleryKind::identity_on:
    case GalleryKind::cantor_plus_interval:
      return encode_matrix_system(
          identity_on(cantor_plus_interval(spec.level, spec.grid)),
          "cantor" + std::to_string(spec.level) + "_" + std::to_string(spec.grid) + "_identity");
    case GalleryKind::random_system: {
      const std::string name =
          "random" + std::to_string(spec.n) + "_seed" + std::to_string(spec.seed) +
          (spec.metric == RandomMetricKind::euclidean_square ? "_euclidean" : "_tree");
      if (spec.metric == RandomMetricKind::random_tree)
        return encode_matrix_system(random_system(spec.n, spec.seed, spec.metric), name);
      const DynSystem sys = random_system(spec.n, spec.seed, spec.metric);
      SystemFile f;
      f.name = name;
      f.points = sys.space().labels();
      f.kind = SystemFile::MetricKind::euclidean;
      f.coords = random_euclidean_coords(spec.n, spec.seed);
      f.map = sys.fwd();
      return f;
    }
  }
  throw BadParams("unknown gallery kind");
}

}  // namespace shadowlab
