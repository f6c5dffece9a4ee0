// Command-line surface for the shadowability analyzer.
//
// Exit codes: 0 success, 1 negative certify verdict, 2 input error,
// 3 I/O error, 4 resource cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowlab/shadowlab.hpp"

namespace {

using namespace shadowlab;

Rat parse_rat_arg(const std::string& text, const std::string& flag) {
  auto r = parse_rat(text);
  if (!r) throw BadParams(flag + " expects a rational like 1/4, got '" + text + "'");
  if (*r < Rat(0)) throw BadParams(flag + " must be nonnegative");
  return *r;
}

std::vector<Rat> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<Rat> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) grid.push_back(parse_rat_arg(tok, flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (grid.empty()) throw BadParams(flag + " must name at least one rational");
  return grid;
}

int cmd_validate(const std::string& path) {
  nlohmann::ordered_json report;
  try {
    const SystemFile f = read_system_file(path);
    const DynSystem sys = decode_system(f);
    report["valid"] = true;
    report["name"] = f.name;
    report["points"] = sys.size();
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const InvalidMetric& e) {
    report["valid"] = false;
    report["kind"] = e.violation.name();
    report["i"] = e.violation.i;
    report["j"] = e.violation.j;
    report["k"] = e.violation.k;
    report["message"] = e.violation.message();
  } catch (const NotAPermutation& e) {
    report["valid"] = false;
    report["kind"] = "NotAPermutation";
    report["message"] = e.what();
  } catch (const ParseError& e) {
    report["valid"] = false;
    report["kind"] = "ParseError";
    report["message"] = e.what();
  } catch (const BadParams& e) {
    report["valid"] = false;
    report["kind"] = "BadParams";
    report["message"] = e.what();
  }
  std::cout << report.dump(2) << "\n";
  return 2;
}

int cmd_generate(const std::string& kind, int n, int k, int levels, int level, int grid,
                 std::uint64_t seed, const std::string& metric, const std::string& out) {
  GallerySpec spec;
  if (kind == "circle") {
    spec.kind = GalleryKind::circle_rotation;
    spec.n = n;
    spec.k = k;
  } else if (kind == "odometer") {
    spec.kind = GalleryKind::odometer;
    spec.levels = levels;
  } else if (kind == "cat") {
    spec.kind = GalleryKind::cat_map;
    spec.n = n;
  } else if (kind == "cantor") {
    spec.kind = GalleryKind::cantor_plus_interval;
    spec.level = level;
    spec.grid = grid;
  } else if (kind == "random") {
    spec.kind = GalleryKind::random_system;
    spec.n = n;
    spec.seed = seed;
    if (metric == "euclidean_square")
      spec.metric = RandomMetricKind::euclidean_square;
    else if (metric == "random_tree")
      spec.metric = RandomMetricKind::random_tree;
    else
      throw BadParams("unknown metric kind '" + metric + "'");
  } else {
    throw BadParams("unknown generator kind '" + kind + "'");
  }
  const SystemFile f = encode_gallery_system(spec);
  write_system_file(out, f);
  std::cout << "wrote " << f.name << " (" << f.points.size() << " points) to " << out << "\n";
  return 0;
}

int cmd_shadow(const std::string& path, const Rat& eps, const Rat& delta, bool witness,
               std::size_t state_cap) {
  const DynSystem sys = decode_system(read_system_file(path));
  ShadowEngine engine(sys, AutomatonLimits{state_cap});
  const PointSet sh = engine.shadowable_points(eps, delta);
  std::cout << "system: " << path << "\n";
  std::cout << "eps: " << to_string(eps) << "\n";
  std::cout << "delta: " << to_string(delta) << "\n";
  std::cout << "shadowable (" << sh.count() << " of " << sys.size() << "):";
  for (int m : sh.members()) std::cout << ' ' << sys.space().label(static_cast<std::size_t>(m));
  std::cout << "\n";
  if (witness) {
    for (std::size_t x = 0; x < sys.size(); ++x) {
      if (sh.test(x)) continue;
      const ShadowVerdict v = engine.is_shadowable(static_cast<int>(x), eps, delta);
      std::cout << "witness " << sys.space().label(x) << " [center=" << v.center << "]:";
      for (int w : v.window) std::cout << ' ' << sys.space().label(static_cast<std::size_t>(w));
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& eps_grid, const std::string& delta_grid,
              const std::string& out, const std::string& json_out, bool include_sets,
              std::size_t state_cap) {
  const SystemFile f = read_system_file(path);
  const DynSystem sys = decode_system(f);
  SweepOptions opts;
  opts.include_sets = include_sets;
  opts.limits.state_cap = state_cap;
  if (!eps_grid.empty()) opts.eps_grid = parse_grid(eps_grid, "--eps-grid");
  if (!delta_grid.empty()) opts.delta_grid = parse_grid(delta_grid, "--delta-grid");
  const ScaleReport report = run_sweep(sys, f.name, opts);
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw IoError("cannot write " + out);
    os << to_csv(report);
    if (!os) throw IoError("write failed for " + out);
  }
  if (!json_out.empty()) {
    std::ofstream os(json_out, std::ios::binary);
    if (!os) throw IoError("cannot write " + json_out);
    os << report_to_json(report, include_sets).dump(2) << "\n";
    if (!os) throw IoError("write failed for " + json_out);
  }
  std::cout << "swept " << report.rows.size() << " cells of " << f.name << " into " << out << "\n";
  return 0;
}

int cmd_classify(const std::string& path) {
  const SystemFile f = read_system_file(path);
  const DynSystem sys = decode_system(f);
  std::cout << "system: " << f.name << "\n";
  std::cout << "points: " << sys.size() << "\n";
  std::cout << "minimal: " << (is_minimal(sys) ? "true" : "false") << "\n";
  std::cout << "isometry: " << (is_isometry(sys) ? "true" : "false") << "\n";
  if (sys.size() < 2) {
    std::cout << "distality margin: trivial (singleton space)\n";
    return 0;
  }
  const DistalityMargin margin = distality_margin(sys);
  std::cout << "distality margin: " << to_string(margin.margin) << " (witness "
            << sys.space().label(static_cast<std::size_t>(margin.x)) << ","
            << sys.space().label(static_cast<std::size_t>(margin.y)) << ")\n";
  std::cout << "equicontinuity modulus:\n";
  for (const auto& [alpha, beta] : equicontinuity_curve(sys))
    std::cout << "  alpha=" << to_string(alpha) << " -> beta=" << to_string(beta) << "\n";
  return 0;
}

int cmd_certify(const std::string& path, const std::string& point, const Rat& eps,
                std::size_t state_cap) {
  const SystemFile f = read_system_file(path);
  const DynSystem sys = decode_system(f);
  const auto idx = sys.space().find_label(point);
  if (!idx) throw UnknownPoint("no point labeled '" + point + "'");
  const auto cert = clopen_shadow_certificate(sys, *idx, eps);
  if (!cert) {
    std::cout << "none\n";
    return 1;
  }
  std::cout << "delta: " << to_string(cert->delta) << "\n";
  std::cout << "region (" << cert->region.count() << " points):";
  for (int m : cert->region.members())
    std::cout << ' ' << sys.space().label(static_cast<std::size_t>(m));
  std::cout << "\n";
  std::cout << "trace:\n";
  std::cout << "  eps_prime: " << to_string(cert->trace.eps_prime) << "\n";
  std::cout << "  gap: " << to_string(cert->trace.gap) << "\n";
  std::cout << "  region_diameter: " << to_string(cert->trace.region_diameter) << "\n";
  std::cout << "  separation: " << to_string(cert->trace.separation) << "\n";
  std::cout << "  delta_prime: " << to_string(cert->trace.delta_prime) << "\n";
  const bool trace_ok = check_certificate(sys, *idx, eps, *cert);
  ShadowEngine engine(sys, AutomatonLimits{state_cap});
  const bool engine_ok = engine.is_shadowable(*idx, eps, cert->delta).shadowable;
  std::cout << "trace verified: " << (trace_ok ? "true" : "false") << "\n";
  std::cout << "engine confirms: " << (engine_ok ? "true" : "false") << "\n";
  if (!trace_ok || !engine_ok) {
    std::cerr << "error: certificate failed re-verification\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact shadowability analysis for finite metric dynamical systems"};
  app.require_subcommand(1);

  std::string path;
  std::string out;
  std::string json_out;
  std::string kind;
  std::string metric = "euclidean_square";
  std::string eps_text;
  std::string delta_text;
  std::string eps_grid;
  std::string delta_grid;
  std::string point;
  int n = 0;
  int k = 0;
  int levels = 0;
  int level = 0;
  int grid = 0;
  std::uint64_t seed = 0;
  bool witness = false;
  bool include_sets = false;
  std::size_t state_cap = AutomatonLimits{}.state_cap;

  CLI::App* validate = app.add_subcommand("validate", "check a system file");
  validate->add_option("path", path)->required();

  CLI::App* generate = app.add_subcommand("generate", "write a gallery system file");
  generate->add_option("--kind", kind, "circle|odometer|cat|cantor|random")->required();
  generate->add_option("--n", n, "point count (circle, cat, random)");
  generate->add_option("--k", k, "rotation step (circle)");
  generate->add_option("--levels", levels, "odometer levels");
  generate->add_option("--level", level, "cantor level");
  generate->add_option("--grid", grid, "cantor interval grid points");
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--metric", metric, "euclidean_square|random_tree");
  generate->add_option("--out", out)->required();

  CLI::App* shadow = app.add_subcommand("shadow", "shadowable points at one scale pair");
  shadow->add_option("path", path)->required();
  shadow->add_option("--eps", eps_text)->required();
  shadow->add_option("--delta", delta_text)->required();
  shadow->add_flag("--witness", witness, "print a bad window per excluded point");
  shadow->add_option("--state-cap", state_cap);

  CLI::App* sweep = app.add_subcommand("sweep", "full scale-grid report");
  sweep->add_option("path", path)->required();
  sweep->add_option("--eps-grid", eps_grid, "comma-separated rationals");
  sweep->add_option("--delta-grid", delta_grid, "comma-separated rationals");
  sweep->add_option("--out", out, "CSV output path")->required();
  sweep->add_option("--json", json_out, "also write a JSON report");
  sweep->add_flag("--include-sets", include_sets, "list shadowable sets in the JSON report");
  sweep->add_option("--state-cap", state_cap);

  CLI::App* classify = app.add_subcommand("classify", "distality and equicontinuity report");
  classify->add_option("path", path)->required();

  CLI::App* certify = app.add_subcommand("certify", "clopen shadowing certificate for one point");
  certify->add_option("path", path)->required();
  certify->add_option("--point", point)->required();
  certify->add_option("--eps", eps_text)->required();
  certify->add_option("--state-cap", state_cap);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (generate->parsed())
      return cmd_generate(kind, n, k, levels, level, grid, seed, metric, out);
    if (shadow->parsed())
      return cmd_shadow(path, parse_rat_arg(eps_text, "--eps"), parse_rat_arg(delta_text, "--delta"),
                        witness, state_cap);
    if (sweep->parsed())
      return cmd_sweep(path, eps_grid, delta_grid, out, json_out, include_sets, state_cap);
    if (classify->parsed()) return cmd_classify(path);
    if (certify->parsed())
      return cmd_certify(path, point, parse_rat_arg(eps_text, "--eps"), state_cap);
  } catch (const shadowlab::StateCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const shadowlab::ExplosionGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const shadowlab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const shadowlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
