#pragma once

// Canned benchmark experiments: the four published convergence-table
// configurations on the two built-in surfaces, plus the pathway-convergence
// study, with the published error and rate columns embedded for --expect
// style comparisons.

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hisd/convergence.hpp"
#include "hisd/linalg.hpp"

namespace hisd {

/// Published error and rate columns for one benchmark table. Columns are
/// ordered position first, then each direction vector; every error column
/// has one entry per step size and every rate column one entry per adjacent
/// pair.
struct Expectations {
  std::vector<Vec> err_columns;
  std::vector<Vec> rate_columns;
  double err_rtol = 0.05;
  double rate_atol = 0.1;
};

struct PresetBundle {
  ExperimentConfig config;
  std::optional<Expectations> expectations;
};

inline std::vector<std::string> preset_names() {
  return {"table1", "table2", "table3", "table4", "example3"};
}

inline PresetBundle preset(const std::string& name) {
  const std::vector<double> table_taus = {1.0 / 32, 1.0 / 64, 1.0 / 128,
                                          1.0 / 256};
  const double table_tau_ref = std::ldexp(1.0, -13);

  ExperimentConfig config;
  config.mode = Mode::kHiSD;
  config.beta = 1.0;
  config.gamma = 1.0;
  config.duration = 1.0;
  config.taus = table_taus;
  config.tau_ref = table_tau_ref;

  if (name == "table1") {
    config.model = "minyaev-quapp";
    config.k = 1;
    config.x0 = {1.0, 1.0};
    config.frame0 = {{0.0, 1.0}};
    Expectations expect;
    expect.err_columns = {{2.19e-2, 1.03e-2, 4.95e-3, 2.40e-3},
                          {1.72e-2, 8.29e-3, 4.05e-3, 1.98e-3}};
    expect.rate_columns = {{1.09, 1.05, 1.04}, {1.05, 1.03, 1.03}};
    return {config, expect};
  }
  if (name == "table2") {
    config.model = "minyaev-quapp";
    config.k = 2;
    config.x0 = {1.0, 1.0};
    config.frame0 = {{0.0, 1.0}, {1.0, 0.0}};
    Expectations expect;
    const Vec v_err = {1.31e-2, 6.52e-3, 3.23e-3, 1.59e-3};
    const Vec v_rate = {1.01, 1.01, 1.02};
    expect.err_columns = {{1.50e-2, 7.41e-3, 3.66e-3, 1.79e-3}, v_err, v_err};
    expect.rate_columns = {{1.02, 1.02, 1.03}, v_rate, v_rate};
    return {config, expect};
  }
  if (name == "table3") {
    config.model = "eckhardt";
    config.k = 1;
    config.x0 = {-2.0, 1.0};
    const double s = std::sqrt(2.0);
    config.frame0 = {{-1.0 / s, 1.0 / s}};
    Expectations expect;
    expect.err_columns = {{1.41e-2, 6.98e-3, 3.45e-3, 1.70e-3},
                          {2.16e-3, 1.09e-3, 5.46e-4, 2.70e-4}};
    expect.rate_columns = {{1.01, 1.01, 1.02}, {0.98, 1.00, 1.02}};
    return {config, expect};
  }
  if (name == "table4") {
    config.model = "eckhardt";
    config.k = 2;
    config.x0 = {-2.0, 1.0};
    const double s = std::sqrt(10.0);
    config.frame0 = {{-1.0 / s, 3.0 / s}, {3.0 / s, 1.0 / s}};
    Expectations expect;
    const Vec v_err = {2.25e-3, 1.11e-3, 5.51e-4, 2.71e-4};
    const Vec v_rate = {1.01, 1.02, 1.03};
    expect.err_columns = {{5.78e-3, 2.86e-3, 1.41e-3, 6.95e-4}, v_err, v_err};
    expect.rate_columns = {{1.02, 1.02, 1.03}, v_rate, v_rate};
    return {config, expect};
  }
  if (name == "example3") {
    config.model = "eckhardt";
    config.k = 1;
    config.x0 = {1.5, 1.2};
    const double s = std::sqrt(5.0);
    config.frame0 = {{-1.0 / s, 2.0 / s}};
    config.duration = 5.0;
    config.taus = {std::ldexp(1.0, -2), std::ldexp(1.0, -3),
                   std::ldexp(1.0, -4), std::ldexp(1.0, -5),
                   std::ldexp(1.0, -6), std::ldexp(1.0, -7)};
    config.tau_ref = std::ldexp(1.0, -8);
    return {config, std::nullopt};
  }
  throw std::invalid_argument("unknown preset: " + name);
}

/// Compares a computed rate table against published columns. Errors must
/// match within err_rtol relative, rates within rate_atol absolute. Returns
/// one human-readable line per mismatch; empty means agreement.
inline std::vector<std::string> compare_to_expectations(
    const RateTable& table, const Expectations& expect) {
  std::vector<std::string> mismatches;
  const std::size_t columns = 1 + table.config.k;
  if (expect.err_columns.size() != columns ||
      expect.rate_columns.size() != columns)
    throw std::invalid_argument(
        "expectation column count does not match the experiment");

  const auto column_name = [](std::size_t c) {
    return c == 0 ? std::string("x") : "v" + std::to_string(c);
  };
  const auto measured_err = [&](std::size_t c, std::size_t row) {
    return c == 0 ? table.rows[row].err_x : table.rows[row].err_v[c - 1];
  };

  char line[160];
  for (std::size_t c = 0; c < columns; ++c) {
    if (expect.err_columns[c].size() != table.rows.size() ||
        expect.rate_columns[c].size() + 1 != table.rows.size())
      throw std::invalid_argument(
          "expectation row count does not match the step-size list");
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
      const double want = expect.err_columns[c][row];
      const double got = measured_err(c, row);
      if (!(std::abs(got - want) <= expect.err_rtol * std::abs(want))) {
        std::snprintf(line, sizeof line,
                      "err_%s at tau=%g: measured %.6e, published %.6e "
                      "(tolerance %.0f%% relative)",
                      column_name(c).c_str(), table.rows[row].tau, got, want,
                      100.0 * expect.err_rtol);
        mismatches.emplace_back(line);
      }
    }
    for (std::size_t r = 0; r < expect.rate_columns[c].size(); ++r) {
      const double want = expect.rate_columns[c][r];
      const double got = table.rates[r][c];
      if (!(std::abs(got - want) <= expect.rate_atol)) {
        std::snprintf(line, sizeof line,
                      "rate_%s between tau=%g and tau=%g: measured %.4f, "
                      "published %.2f (tolerance %.2f absolute)",
                      column_name(c).c_str(), table.rows[r].tau,
                      table.rows[r + 1].tau, got, want, expect.rate_atol);
        mismatches.emplace_back(line);
      }
    }
  }
  return mismatches;
}

}  // namespace hisd
