#pragma once

// JSON views of the report types. Lives with the CLI so the core library
// carries no serialization dependency; numbers round-trip at full precision
// (undefined rates become null).

#include <string>

#include "hisd/convergence.hpp"
#include "hisd/dynamics.hpp"
#include "hisd/landscape.hpp"
#include "json.hpp"

namespace hisd_tool {

inline const char* mode_name(hisd::Mode mode) {
  return mode == hisd::Mode::kHiSD ? "hisd" : "ghisd";
}

inline nlohmann::json config_json(const hisd::ExperimentConfig& c) {
  return nlohmann::json{{"model", c.model},
                        {"mode", mode_name(c.mode)},
                        {"k", c.k},
                        {"beta", c.beta},
                        {"gamma", c.gamma},
                        {"T", c.duration},
                        {"x0", c.x0},
                        {"frame0", c.frame0},
                        {"taus", c.taus},
                        {"tau_ref", c.tau_ref},
                        {"ghisd_literal_bracket", c.ghisd_literal_bracket}};
}

inline nlohmann::json rate_table_json(
    const hisd::RateTable& table,
    nlohmann::json checks = nlohmann::json::array()) {
  nlohmann::json rows = nlohmann::json::array();
  for (const hisd::ErrorReport& r : table.rows)
    rows.push_back(
        {{"tau", r.tau}, {"err_x", r.err_x}, {"err_v", r.err_v}});
  nlohmann::json rates = nlohmann::json::array();
  for (const hisd::Vec& pair : table.rates) {
    nlohmann::json row = nlohmann::json::array();
    for (double rate : pair) {
      if (std::isfinite(rate))
        row.push_back(rate);
      else
        row.push_back(nullptr);
    }
    rates.push_back(std::move(row));
  }
  return nlohmann::json{{"config", config_json(table.config)},
                        {"rows", std::move(rows)},
                        {"rates", std::move(rates)},
                        {"checks", std::move(checks)}};
}

inline nlohmann::json trajectory_json(const hisd::Trajectory& traj,
                                      const hisd::EnergyLandscape* landscape,
                                      bool include_intermediates) {
  nlohmann::json j;
  j["params"] = {{"mode", mode_name(traj.params.mode)},
                 {"k", traj.params.k},
                 {"beta", traj.params.beta},
                 {"gamma", traj.params.gamma},
                 {"tau", traj.params.tau},
                 {"ghisd_literal_bracket", traj.params.ghisd_literal_bracket}};
  j["duration"] = traj.duration;
  nlohmann::json records = nlohmann::json::array();
  for (const hisd::StepRecord& rec : traj.records) {
    nlohmann::json r{{"t", rec.state.t},
                     {"x", rec.state.x.coords()},
                     {"v", rec.state.frame.vectors()}};
    if (landscape) r["energy"] = landscape->energy(rec.state.x);
    if (include_intermediates && rec.intermediates) {
      r["tilde"] = rec.intermediates->tilde;
      r["y"] = rec.intermediates->y;
      r["neg_hessian_norm"] = rec.intermediates->neg_hessian_norm;
    }
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

}  // namespace hisd_tool
