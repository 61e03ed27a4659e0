#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "hisd/convergence.hpp"
#include "hisd/dynamics.hpp"
#include "hisd/presets.hpp"
#include "hisd/surfaces.hpp"

using namespace hisd;

namespace {

ExperimentConfig small_config(double tau, std::size_t k = 1) {
  ExperimentConfig c;
  c.model = "minyaev-quapp";
  c.k = k;
  c.x0 = {1.0, 1.0};
  c.frame0 = k == 1 ? std::vector<Vec>{{0.0, 1.0}}
                    : std::vector<Vec>{{0.0, 1.0}, {1.0, 0.0}};
  c.taus = {tau};
  c.tau_ref = tau;
  return c;
}

Trajectory run_at(const ExperimentConfig& c, double tau) {
  return detail::run_config(c, tau, false);
}

}  // namespace

TEST_CASE("integral step ratios") {
  CHECK(detail::integral_ratio(0.25, 0.125) == 2);
  CHECK(detail::integral_ratio(0.25, 0.25) == 1);
  CHECK(detail::integral_ratio(1.0, 1.0 / 3) == 3);
  CHECK_FALSE(detail::integral_ratio(0.25, 1.0 / 3).has_value());
  CHECK_FALSE(detail::integral_ratio(0.125, 0.25).has_value());
  CHECK_FALSE(detail::integral_ratio(-0.25, 0.125).has_value());
  CHECK_FALSE(detail::integral_ratio(0.25, 0.0).has_value());
}

TEST_CASE("sup errors over the coarse grid") {
  const ExperimentConfig c = small_config(1.0 / 8);
  const Trajectory traj = run_at(c, 1.0 / 8);

  SUBCASE("a run compared to itself has zero error") {
    const ErrorReport r = sup_errors(traj, traj);
    CHECK(r.tau == 1.0 / 8);
    CHECK(r.err_x == 0.0);
    CHECK(r.err_v == Vec{0.0});
  }
  SUBCASE("a single perturbed grid point sets the sup exactly") {
    Trajectory perturbed = traj;
    const SaddleState& s = traj.records[3].state;
    Vec moved = s.x.coords();
    moved[0] += 0.25;
    perturbed.records[3] =
        StepRecord{SaddleState(s.t, Point(std::move(moved)), s.frame),
                   std::nullopt};
    const ErrorReport r = sup_errors(perturbed, traj);
    CHECK(r.err_x == 0.25);
    CHECK(r.err_v == Vec{0.0});
  }
  SUBCASE("coarse grid against a nested finer grid") {
    const Trajectory fine = run_at(c, 1.0 / 32);
    const ErrorReport r = sup_errors(traj, fine);
    CHECK(r.err_x > 0.0);
    CHECK(r.err_v[0] > 0.0);
    // errors at this scale are small but far above rounding noise
    CHECK(r.err_x < 0.5);
  }
}

TEST_CASE("mismatched grids are rejected") {
  const ExperimentConfig c = small_config(1.0 / 4);
  const Trajectory quarter = run_at(c, 1.0 / 4);
  SUBCASE("non-integer step ratio") {
    const Trajectory third = run_at(c, 1.0 / 3);
    CHECK_THROWS_AS(sup_errors(quarter, third), GridMismatch);
  }
  SUBCASE("different durations") {
    ExperimentConfig longer = c;
    longer.duration = 2.0;
    const Trajectory two = run_at(longer, 1.0 / 4);
    CHECK_THROWS_AS(sup_errors(quarter, two), GridMismatch);
  }
  SUBCASE("different saddle indices") {
    const Trajectory k2 = run_at(small_config(1.0 / 4, 2), 1.0 / 4);
    CHECK_THROWS_AS(sup_errors(quarter, k2), GridMismatch);
  }
}

TEST_CASE("adjacent-pair rates") {
  // a clean error halving across a step halving is first order exactly
  CHECK(detail::pair_rate(2e-2, 1e-2, 0.25, 0.125) == 1.0);
  CHECK(detail::pair_rate(4e-2, 1e-2, 0.25, 0.125) == 2.0);
  CHECK(std::isnan(detail::pair_rate(0.0, 1e-2, 0.25, 0.125)));
  CHECK(std::isnan(detail::pair_rate(1e-2, 0.0, 0.25, 0.125)));
  CHECK(std::isnan(detail::pair_rate(1e-2, 2e-2, 0.25, 0.25)));
}

TEST_CASE("experiment config validation") {
  ExperimentConfig c = small_config(1.0 / 8);
  CHECK_NOTHROW(c.validate());
  SUBCASE("empty step list") {
    c.taus.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("steps must not increase") {
    c.taus = {1.0 / 16, 1.0 / 8};
    c.tau_ref = 1.0 / 16;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("steps must nest with the reference") {
    c.taus = {1.0 / 4, 1.0 / 5};
    c.tau_ref = 1.0 / 5;
    CHECK_THROWS_AS(c.validate(), GridMismatch);
  }
  SUBCASE("duration must be an integer number of steps") {
    c.taus = {0.3};
    c.tau_ref = 0.3;
    CHECK_THROWS_AS(c.validate(), NonIntegerStepCount);
  }
  SUBCASE("reference step required") {
    c.tau_ref = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("frame count must match the saddle index") {
    c.k = 2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("non-gradient mode pins the relaxation constants") {
    c.mode = Mode::kGHiSD;
    c.beta = 2.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("preset catalogue") {
  CHECK(preset_names() == std::vector<std::string>{"table1", "table2",
                                                   "table3", "table4",
                                                   "example3"});
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);

  SUBCASE("benchmark table grids and initial data") {
    for (const std::string& name :
         {std::string("table1"), std::string("table2"), std::string("table3"),
          std::string("table4")}) {
      CAPTURE(name);
      const PresetBundle b = preset(name);
      CHECK(b.config.taus ==
            std::vector<double>{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
      CHECK(b.config.tau_ref == std::ldexp(1.0, -13));
      CHECK(b.config.duration == 1.0);
      CHECK(b.config.beta == 1.0);
      CHECK(b.config.gamma == 1.0);
      CHECK(b.config.mode == Mode::kHiSD);
      REQUIRE(b.expectations.has_value());
      CHECK(b.expectations->err_columns.size() == 1 + b.config.k);
      CHECK(b.expectations->err_rtol == 0.05);
      CHECK(b.expectations->rate_atol == 0.1);
      CHECK_NOTHROW(b.config.validate());
    }
    CHECK(preset("table1").config.x0 == Vec{1.0, 1.0});
    CHECK(preset("table1").config.frame0 ==
          std::vector<Vec>{{0.0, 1.0}});
    CHECK(preset("table2").config.k == 2);
    CHECK(preset("table3").config.model == "eckhardt");
    CHECK(preset("table3").config.x0 == Vec{-2.0, 1.0});
    const double r2 = std::sqrt(2.0);
    CHECK(preset("table3").config.frame0 ==
          std::vector<Vec>{{-1.0 / r2, 1.0 / r2}});
    const double r10 = std::sqrt(10.0);
    CHECK(preset("table4").config.frame0 ==
          std::vector<Vec>{{-1.0 / r10, 3.0 / r10}, {3.0 / r10, 1.0 / r10}});
  }
  SUBCASE("pathway study grid") {
    const PresetBundle b = preset("example3");
    CHECK(b.config.model == "eckhardt");
    CHECK(b.config.duration == 5.0);
    CHECK(b.config.x0 == Vec{1.5, 1.2});
    const double r5 = std::sqrt(5.0);
    CHECK(b.config.frame0 == std::vector<Vec>{{-1.0 / r5, 2.0 / r5}});
    REQUIRE(b.config.taus.size() == 6);
    for (int i = 0; i < 6; ++i)
      CHECK(b.config.taus[static_cast<std::size_t>(i)] ==
            std::ldexp(1.0, -2 - i));
    CHECK(b.config.tau_ref == std::ldexp(1.0, -8));
    CHECK_FALSE(b.expectations.has_value());
    CHECK_NOTHROW(b.config.validate());
  }
}

TEST_CASE("expectation comparison") {
  // hand-built table holding exactly the published columns
  const PresetBundle bundle = preset("table1");
  const Expectations& expect = *bundle.expectations;
  RateTable table;
  table.config = bundle.config;
  for (std::size_t row = 0; row < 4; ++row) {
    ErrorReport r;
    r.tau = bundle.config.taus[row];
    r.err_x = expect.err_columns[0][row];
    r.err_v = {expect.err_columns[1][row]};
    table.rows.push_back(r);
  }
  for (std::size_t r = 0; r < 3; ++r)
    table.rates.push_back(
        {expect.rate_columns[0][r], expect.rate_columns[1][r]});

  SUBCASE("exact agreement") {
    CHECK(compare_to_expectations(table, expect).empty());
  }
  SUBCASE("errors just inside and outside the relative tolerance") {
    RateTable t = table;
    t.rows[2].err_x *= 1.049;
    CHECK(compare_to_expectations(t, expect).empty());
    t.rows[2].err_x = expect.err_columns[0][2] * 1.051;
    const auto mismatches = compare_to_expectations(t, expect);
    REQUIRE(mismatches.size() == 1);
    CHECK(mismatches[0].find("err_x") != std::string::npos);
  }
  SUBCASE("rates use an absolute tolerance") {
    RateTable t = table;
    t.rates[1][1] += 0.11;
    const auto mismatches = compare_to_expectations(t, expect);
    REQUIRE(mismatches.size() == 1);
    CHECK(mismatches[0].find("rate_v1") != std::string::npos);
  }
  SUBCASE("a NaN rate is a mismatch, not an accident of comparison") {
    RateTable t = table;
    t.rates[0][0] = std::nan("");
    CHECK(compare_to_expectations(t, expect).size() == 1);
  }
  SUBCASE("column or row shape mismatches throw") {
    Expectations wrong = expect;
    wrong.err_columns.push_back(wrong.err_columns[0]);
    wrong.rate_columns.push_back(wrong.rate_columns[0]);
    CHECK_THROWS_AS(compare_to_expectations(table, wrong),
                    std::invalid_argument);
    Expectations short_rows = expect;
    short_rows.err_columns[0].pop_back();
    CHECK_THROWS_AS(compare_to_expectations(table, short_rows),
                    std::invalid_argument);
  }
}

TEST_CASE("first benchmark table reproduces its published columns") {
  const PresetBundle bundle = preset("table1");
  const RateTable table = rate_table(bundle.config, 4);
  REQUIRE(table.rows.size() == 4);
  REQUIRE(table.rates.size() == 3);
  const auto mismatches = compare_to_expectations(table, *bundle.expectations);
  for (const std::string& m : mismatches) MESSAGE(m);
  CHECK(mismatches.empty());
}

TEST_CASE("thread count does not change results") {
  const ExperimentConfig config = preset("table1").config;
  const RateTable serial = rate_table(config, 1);
  const RateTable threaded = rate_table(config, 4);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].err_x == threaded.rows[i].err_x);
    CHECK(serial.rows[i].err_v == threaded.rows[i].err_v);
  }
  for (std::size_t r = 0; r < serial.rates.size(); ++r)
    CHECK(serial.rates[r] == threaded.rates[r]);
}

TEST_CASE("errors decrease monotonically on every benchmark table") {
  for (const std::string& name :
       {std::string("table1"), std::string("table2"), std::string("table3"),
        std::string("table4")}) {
    CAPTURE(name);
    const RateTable table = rate_table(preset(name).config, 4);
    for (std::size_t row = 1; row < table.rows.size(); ++row) {
      REQUIRE(table.rows[row].err_x < table.rows[row - 1].err_x);
      for (std::size_t i = 0; i < table.config.k; ++i)
        REQUIRE(table.rows[row].err_v[i] < table.rows[row - 1].err_v[i]);
    }
    for (const Vec& rate : table.rates)
      for (double r : rate) {
        REQUIRE(std::isfinite(r));
        REQUIRE(r > 0.0);
      }
  }
}

TEST_CASE("errors are insensitive to the reference refinement") {
  // Halving the reference step moves each measured error by at most
  // tau_ref_old/2 relative to an error of order tau - tau_ref, i.e. about
  // 1.6% on the finest row and far less on the coarser ones.
  const PresetBundle bundle = preset("table1");
  ExperimentConfig finer = bundle.config;
  finer.tau_ref = std::ldexp(1.0, -14);
  const RateTable a = rate_table(bundle.config, 4);
  const RateTable b = rate_table(finer, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(std::abs(a.rows[i].err_x - b.rows[i].err_x) <=
          0.03 * b.rows[i].err_x);
    CHECK(std::abs(a.rows[i].err_v[0] - b.rows[i].err_v[0]) <=
          0.03 * b.rows[i].err_v[0]);
  }
  // the coarse rows barely notice the change
  CHECK(std::abs(a.rows[0].err_x - b.rows[0].err_x) <= 0.01 * b.rows[0].err_x);
}

TEST_CASE("drift statistics on the first benchmark table") {
  const LemmaReport report = lemma_suite(preset("table1").config, 4);
  REQUIRE(report.stats.size() == 4);
  CHECK(report.violations.empty());
  for (const LemmaStats& s : report.stats) {
    CHECK(s.max_norm_drift > 0.0);
    CHECK(s.max_gs_gap > 0.0);
    CHECK(s.max_cross == 0.0);  // single direction: no cross terms
    CHECK(s.j_hat > 1.0);
    // the run's own hard bound, computed from its recorded Jacobian norms
    CHECK(s.max_norm_drift <= s.tau * s.tau * s.j_hat * s.j_hat);
    CHECK(s.max_gs_gap <= s.tau * s.tau * s.j_hat * s.j_hat);
  }
  REQUIRE(report.decay.size() == 3);
  for (const DecayCheck& d : report.decay) {
    // second-order quantities quarter under a step halving
    CHECK(d.norm_drift_factor == doctest::Approx(4.0).epsilon(0.13));
    CHECK(d.gs_gap_factor == doctest::Approx(4.0).epsilon(0.13));
    CHECK_FALSE(d.norm_drift_at_noise_floor);
    CHECK_FALSE(d.gs_gap_at_noise_floor);
    CHECK(d.cross_at_noise_floor);  // identically zero for k = 1
  }
}

TEST_CASE("drift statistics at a stationary point sit at the noise floor") {
  ExperimentConfig c;
  c.model = "minyaev-quapp";
  c.k = 1;
  c.x0 = {0.0, 0.0};
  const double r2 = std::sqrt(2.0);
  c.frame0 = {{1.0 / r2, -1.0 / r2}};
  c.taus = {1.0 / 16, 1.0 / 32};
  c.tau_ref = 1.0 / 32;
  const LemmaReport report = lemma_suite(c);
  CHECK(report.violations.empty());
  REQUIRE(report.stats.size() == 2);
  for (const LemmaStats& s : report.stats) {
    CHECK(s.max_norm_drift < kLemmaNoiseFloor);
    CHECK(s.max_gs_gap < kLemmaNoiseFloor);
    CHECK(s.max_cross == 0.0);
    CHECK(s.j_hat == doctest::Approx(8.56).epsilon(1e-12));
  }
  REQUIRE(report.decay.size() == 1);
  CHECK(report.decay[0].norm_drift_at_noise_floor);
  CHECK(report.decay[0].gs_gap_at_noise_floor);
  CHECK(report.decay[0].cross_at_noise_floor);
}

TEST_CASE("pathway study on identical ladders measures zero") {
  ExperimentConfig c = small_config(1.0 / 4);
  c.taus = {1.0 / 4, 1.0 / 4};
  c.tau_ref = 1.0 / 4;
  const PathwayReport r = pathway_convergence(c);
  REQUIRE(r.taus.size() == 2);
  REQUIRE(r.adjacent_sup_distance.size() == 1);
  CHECK(r.adjacent_sup_distance[0] == 0.0);
  REQUIRE(r.final_state_distance.size() == 1);
  CHECK(r.final_state_distance[0] == 0.0);
  CHECK(r.terminal_x.size() == 2);
}

TEST_CASE("pathway study converges to an index-1 stationary point") {
  const PathwayReport r = pathway_convergence(preset("example3").config, 4);
  REQUIRE(r.taus.size() == 7);  // six configured steps plus the reference
  REQUIRE(r.adjacent_sup_distance.size() == 6);
  for (std::size_t i = 1; i < r.adjacent_sup_distance.size(); ++i)
    CHECK(r.adjacent_sup_distance[i] < r.adjacent_sup_distance[i - 1]);
  // successive halvings roughly halve the whole-path distance
  CHECK(r.adjacent_sup_distance[0] > 1e-1);
  CHECK(r.adjacent_sup_distance[5] < 5e-3);
  REQUIRE(r.final_state_distance.size() == 6);
  for (double d : r.final_state_distance) CHECK(d < 1e-3);
  CHECK(r.final_state_distance[5] < 1e-5);
  // every ladder member has effectively found the same stationary point
  CHECK(r.terminal_force_norm < 1e-3);
  CHECK(r.terminal_frame_residual < 1e-4);
  CHECK(r.terminal_morse.index == 1);
  CHECK_FALSE(r.terminal_morse.near_singular);
}

TEST_CASE("rate table input validation") {
  ExperimentConfig c = small_config(1.0 / 8);
  CHECK_THROWS_AS(rate_table(c), std::invalid_argument);  // one step size
  c.model = "no-such-model";
  c.taus = {1.0 / 4, 1.0 / 8};
  CHECK_THROWS_AS(rate_table(c), UnknownModel);
}
