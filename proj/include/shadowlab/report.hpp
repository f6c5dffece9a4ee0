#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/shadow_engine.hpp"

namespace shadowlab {

// Per-(eps, delta) sweep over the candidate grids. Results only change at
// realized threshold values, so the default grids are exactly those. Rows are
// ordered eps-major, delta-minor, both ascending; identical inputs produce
// identical bytes.

struct SweepOptions {
  std::vector<Rat> eps_grid;    // empty: distance_values of the space
  std::vector<Rat> delta_grid;  // empty: delta_values of the system
  bool include_sets = false;    // add the shadowable set to JSON rows
  AutomatonLimits limits;
};

struct SweepRow {
  Rat eps;
  Rat delta;
  std::optional<std::size_t> n_shadowable;  // empty when the cell failed
  std::optional<bool> potp;
  std::size_t n_chain_classes = 0;
  std::size_t n_deg_points = 0;
  std::string status;  // "ok" or "state_cap"
  std::vector<std::string> shadowable_labels;
};

struct ScaleReport {
  std::string system;
  std::vector<SweepRow> rows;
};

inline ScaleReport run_sweep(const DynSystem& sys, std::string name, SweepOptions opts = {}) {
  ScaleReport report;
  report.system = std::move(name);
  std::vector<Rat> eps_grid = opts.eps_grid.empty() ? distance_values(sys.space()) : opts.eps_grid;
  std::vector<Rat> delta_grid = opts.delta_grid.empty() ? delta_values(sys) : opts.delta_grid;

  std::map<Rat, std::size_t> chain_cache;
  std::map<Rat, std::size_t> deg_cache;
  ShadowEngine engine(sys, opts.limits);
  for (const Rat& eps : eps_grid) {
    const auto deg_it = deg_cache.find(eps);
    const std::size_t n_deg =
        deg_it != deg_cache.end() ? deg_it->second
                                  : (deg_cache[eps] = deg_points(sys.space(), eps).count());
    for (const Rat& delta : delta_grid) {
      const auto chain_it = chain_cache.find(delta);
      const std::size_t n_chain =
          chain_it != chain_cache.end()
              ? chain_it->second
              : (chain_cache[delta] = chain_classes(sys, delta).classes.size());
      SweepRow row;
      row.eps = eps;
      row.delta = delta;
      row.n_chain_classes = n_chain;
      row.n_deg_points = n_deg;
      try {
        const PointSet sh = engine.shadowable_points(eps, delta);
        row.n_shadowable = sh.count();
        row.potp = sh.count() == sys.size();
        row.status = "ok";
        if (opts.include_sets)
          for (int m : sh.members())
            row.shadowable_labels.push_back(sys.space().label(static_cast<std::size_t>(m)));
      } catch (const StateCapExceeded&) {
        row.status = "state_cap";
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

inline std::string to_csv(const ScaleReport& report) {
  std::ostringstream out;
  out << "eps,delta,n_shadowable,potp,n_chain_classes,n_deg_points,status\n";
  for (const SweepRow& r : report.rows) {
    out << to_string(r.eps) << ',' << to_string(r.delta) << ',';
    if (r.n_shadowable) out << *r.n_shadowable;
    out << ',';
    if (r.potp) out << (*r.potp ? "true" : "false");
    out << ',' << r.n_chain_classes << ',' << r.n_deg_points << ',' << r.status << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json report_to_json(const ScaleReport& report, bool include_sets) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["eps"] = to_string(r.eps);
    row["delta"] = to_string(r.delta);
    if (r.n_shadowable)
      row["n_shadowable"] = *r.n_shadowable;
    else
      row["n_shadowable"] = nullptr;
    if (r.potp)
      row["potp"] = *r.potp;
    else
      row["potp"] = nullptr;
    row["n_chain_classes"] = r.n_chain_classes;
    row["n_deg_points"] = r.n_deg_points;
    row["status"] = r.status;
    if (include_sets) row["shadowable"] = r.shadowable_labels;
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["system"] = report.system;
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace shadowlab
