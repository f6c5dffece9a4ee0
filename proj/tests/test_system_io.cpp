#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "shadowlab/report.hpp"
#include "shadowlab/system_io.hpp"

using namespace shadowlab;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool same_system(const DynSystem& a, const DynSystem& b) {
  if (a.size() != b.size() || a.fwd() != b.fwd()) return false;
  if (a.space().labels() != b.space().labels()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a.space().dist(i, j) != b.space().dist(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("every gallery kind round-trips through its file encoding", "[io]") {
  std::vector<GallerySpec> specs;
  GallerySpec s;
  s.kind = GalleryKind::circle_rotation;
  s.n = 24;
  s.k = 7;
  specs.push_back(s);
  s = {};
  s.kind = GalleryKind::odometer;
  s.levels = 3;
  specs.push_back(s);
  s = {};
  s.kind = GalleryKind::cat_map;
  s.n = 3;
  specs.push_back(s);
  s = {};
  s.kind = GalleryKind::cantor_plus_interval;
  s.level = 2;
  s.grid = 5;
  specs.push_back(s);
  s = {};
  s.kind = GalleryKind::random_system;
  s.n = 6;
  s.seed = 1;
  specs.push_back(s);
  s.metric = RandomMetricKind::random_tree;
  specs.push_back(s);

  for (const auto& spec : specs) {
    const SystemFile encoded = encode_gallery_system(spec);
    TempFile tmp("shadowlab_io_" + encoded.name + ".json");
    write_system_file(tmp.path, encoded);
    const SystemFile read = read_system_file(tmp.path);
    CHECK(read.name == encoded.name);
    CHECK(same_system(decode_system(read), make_gallery_system(spec)));
    // writing is deterministic byte for byte
    TempFile tmp2("shadowlab_io2_" + encoded.name + ".json");
    write_system_file(tmp2.path, encode_gallery_system(spec));
    CHECK(slurp(tmp.path) == slurp(tmp2.path));
  }
}

TEST_CASE("euclidean files rationalize exactly like the generator", "[io]") {
  const auto coords = random_euclidean_coords(5, 9);
  SystemFile f;
  f.name = "coords";
  f.kind = SystemFile::MetricKind::euclidean;
  f.coords = coords;
  for (int i = 0; i < 5; ++i) f.points.push_back("p" + std::to_string(i));
  for (int i = 0; i < 5; ++i) f.map.push_back(i);
  const DynSystem sys = decode_system(f);
  const FiniteMetricSpace direct = euclidean_space_from_coords(coords);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(sys.space().dist(i, j) == direct.dist(i, j));
}

TEST_CASE("loader failure modes", "[io]") {
  CHECK_THROWS_AS(read_system_file("/nonexistent/system.json"), IoError);

  TempFile bad("shadowlab_bad.json");
  std::ofstream(bad.path) << "{ not json";
  CHECK_THROWS_AS(read_system_file(bad.path), ParseError);

  TempFile missing("shadowlab_missing.json");
  std::ofstream(missing.path) << R"({"name":"x","points":["a"],"map":[0]})";
  CHECK_THROWS_AS(read_system_file(missing.path), ParseError);

  // repeated map index
  SystemFile f;
  f.name = "dup";
  f.kind = SystemFile::MetricKind::matrix;
  f.scale_denominator = 1;
  f.points = {"a", "b"};
  f.entries = {{0, 1}, {1, 0}};
  f.map = {0, 0};
  CHECK_THROWS_AS(decode_system(f), NotAPermutation);

  // triangle-violating matrix reports the triple
  f.points = {"a", "b", "c"};
  f.entries = {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}};
  f.map = {0, 1, 2};
  try {
    decode_system(f);
    FAIL("expected InvalidMetric");
  } catch (const InvalidMetric& e) {
    CHECK(e.violation.kind == MetricViolationKind::TriangleViolation);
    CHECK(e.violation.i == 0);
    CHECK(e.violation.j == 1);
    CHECK(e.violation.k == 2);
  }

  // bad rational strings in coords
  TempFile badrat("shadowlab_badrat.json");
  std::ofstream(badrat.path) << R"({"name":"x","points":["a"],)"
                             << R"("metric":{"kind":"euclidean","coords":[["0.5","1/2"]]},"map":[0]})";
  CHECK_THROWS_AS(read_system_file(badrat.path), ParseError);
}

TEST_CASE("sweep reports cover the grid deterministically", "[io][report]") {
  const auto sys = odometer(2);
  const ScaleReport a = run_sweep(sys, "odometer2");
  const ScaleReport b = run_sweep(sys, "odometer2");
  CHECK(to_csv(a) == to_csv(b));
  CHECK(report_to_json(a, false).dump() == report_to_json(b, false).dump());

  const auto epss = distance_values(sys.space());
  const auto deltas = delta_values(sys);
  REQUIRE(a.rows.size() == epss.size() * deltas.size());

  // rows are eps-major ascending and per-cell results match direct queries
  ShadowEngine engine(sys);
  std::size_t idx = 0;
  for (const Rat& eps : epss)
    for (const Rat& delta : deltas) {
      const SweepRow& row = a.rows[idx++];
      CHECK(row.eps == eps);
      CHECK(row.delta == delta);
      REQUIRE(row.n_shadowable.has_value());
      CHECK(*row.n_shadowable == engine.shadowable_points(eps, delta).count());
      CHECK(*row.potp == (*row.n_shadowable == sys.size()));
      CHECK(row.n_chain_classes == chain_classes(sys, delta).classes.size());
      CHECK(row.n_deg_points == deg_points(sys.space(), eps).count());
      CHECK(row.status == "ok");
    }

  // n_shadowable is nonincreasing along delta within a fixed eps
  idx = 0;
  for (std::size_t e = 0; e < epss.size(); ++e) {
    std::size_t prev = sys.size() + 1;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const std::size_t cur = *a.rows[idx++].n_shadowable;
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("sweep records capped cells and keeps going", "[io][report]") {
  const auto sys = identity_on(circle_rotation(24, 0).space());
  SweepOptions opts;
  opts.eps_grid = {Rat(5, 24)};
  opts.delta_grid = {Rat(0), Rat(1, 24)};
  opts.limits.state_cap = 10;
  const ScaleReport r = run_sweep(sys, "capped", opts);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].status == "ok");  // delta 0 short-circuits
  CHECK(r.rows[1].status == "state_cap");
  CHECK_FALSE(r.rows[1].n_shadowable.has_value());
  const std::string csv = to_csv(r);
  CHECK(csv.find("state_cap") != std::string::npos);
}

TEST_CASE("csv serializes rationals as p/q", "[io][report]") {
  const ScaleReport r = run_sweep(odometer(1), "odometer1");
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("eps,delta,n_shadowable,potp,n_chain_classes,n_deg_points,status\n", 0) == 0);
  CHECK(csv.find("1/1,1/1") != std::string::npos);
  CHECK(csv.find('.') == std::string::npos);  // no floats anywhere
}
