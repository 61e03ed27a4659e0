#pragma once

// Convergence laboratory: nested-grid sup-norm trajectory errors, adjacent
// step-size rate tables, per-step bound suites for the orthonormalization
// drift quantities, and the pathway-convergence study.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hisd/dynamics.hpp"
#include "hisd/landscape.hpp"
#include "hisd/linalg.hpp"
#include "hisd/surfaces.hpp"

namespace hisd {

/// Thrown when two trajectories do not live on nested time grids.
class GridMismatch : public std::invalid_argument {
 public:
  explicit GridMismatch(const std::string& detail)
      : std::invalid_argument("grid mismatch: " + detail) {}
};

namespace detail {

/// Rounds numer/denom to an integer, or nullopt when it is not one to a
/// relative tolerance of 1e-9.
inline std::optional<long> integral_ratio(double numer, double denom) {
  if (!(denom > 0.0) || !(numer > 0.0)) return std::nullopt;
  const long n = std::lround(numer / denom);
  if (n < 1) return std::nullopt;
  if (std::abs(static_cast<double>(n) * denom - numer) >
      1e-9 * std::max(1.0, std::abs(numer)))
    return std::nullopt;
  return n;
}

}  // namespace detail

/// One experiment: a model, scheme parameters, initial data, and the step
/// sizes of a nested-grid study. The coarse steps are listed from largest to
/// smallest and every one must be an integer multiple of tau_ref.
struct ExperimentConfig {
  std::string model;
  Mode mode = Mode::kHiSD;
  std::size_t k = 1;
  double beta = 1.0;
  double gamma = 1.0;
  double duration = 1.0;
  Vec x0;
  std::vector<Vec> frame0;
  std::vector<double> taus;
  double tau_ref = 0.0;
  bool ghisd_literal_bracket = false;

  void validate() const {
    if (model.empty()) throw std::invalid_argument("config: model name empty");
    if (!(duration > 0.0) || !std::isfinite(duration))
      throw std::invalid_argument("config: duration must be positive");
    if (x0.empty() || !all_finite(x0))
      throw std::invalid_argument("config: initial position invalid");
    if (frame0.size() != k)
      throw std::invalid_argument(
          "config: frame vector count does not match k");
    if (mode == Mode::kGHiSD && (beta != 1.0 || gamma != 1.0))
      throw std::invalid_argument(
          "config: the non-gradient dynamics carries no relaxation "
          "constants; beta and gamma must be 1");
    if (taus.empty()) throw std::invalid_argument("config: no step sizes");
    if (!(tau_ref > 0.0) || !std::isfinite(tau_ref))
      throw std::invalid_argument("config: reference step must be positive");
    double previous = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double tau = taus[i];
      if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("config: step sizes must be positive");
      if (i > 0 && tau > previous)
        throw std::invalid_argument(
            "config: step sizes must be listed from largest to smallest");
      previous = tau;
      if (!detail::integral_ratio(tau, tau_ref))
        throw GridMismatch("step " + std::to_string(tau) +
                           " is not an integer multiple of the reference "
                           "step " +
                           std::to_string(tau_ref));
      if (!detail::integral_ratio(duration, tau))
        throw NonIntegerStepCount(tau, duration);
    }
    if (!detail::integral_ratio(duration, tau_ref))
      throw NonIntegerStepCount(tau_ref, duration);
  }

  SchemeParams params_for(double tau) const {
    SchemeParams p;
    p.beta = beta;
    p.gamma = gamma;
    p.tau = tau;
    p.k = k;
    p.mode = mode;
    p.ghisd_literal_bracket = ghisd_literal_bracket;
    return p;
  }

  SaddleState initial_state() const {
    return SaddleState(0.0, Point(x0), DirectionFrame(frame0));
  }
};

namespace detail {

/// Runs one trajectory of the configured experiment at the given step size.
inline Trajectory run_config(const ExperimentConfig& config, double tau,
                             bool record_intermediates) {
  const SaddleState initial = config.initial_state();
  const SchemeParams p = config.params_for(tau);
  if (config.mode == Mode::kHiSD) {
    const auto landscape = make_landscape(config.model);
    return run_trajectory(initial, p, *landscape, config.duration,
                          record_intermediates);
  }
  const auto system = make_system(config.model);
  return run_trajectory(initial, p, *system, config.duration,
                        record_intermediates);
}

/// Runs one trajectory per step size, at most max_threads at a time. Results
/// are positionally assembled, so the output does not depend on the thread
/// count.
inline std::vector<Trajectory> run_batch(const ExperimentConfig& config,
                                         const std::vector<double>& taus,
                                         bool record_intermediates,
                                         std::size_t max_threads) {
  std::vector<Trajectory> out;
  out.reserve(taus.size());
  if (max_threads <= 1 || taus.size() <= 1) {
    for (double tau : taus)
      out.push_back(run_config(config, tau, record_intermediates));
    return out;
  }
  for (std::size_t start = 0; start < taus.size(); start += max_threads) {
    const std::size_t stop = std::min(taus.size(), start + max_threads);
    std::vector<std::future<Trajectory>> chunk;
    chunk.reserve(stop - start);
    for (std::size_t i = start; i < stop; ++i)
      chunk.push_back(std::async(std::launch::async, run_config,
                                 std::cref(config), taus[i],
                                 record_intermediates));
    for (auto& f : chunk) out.push_back(f.get());
  }
  return out;
}

inline long checked_grid_ratio(const Trajectory& coarse,
                               const Trajectory& reference) {
  if (std::abs(coarse.duration - reference.duration) >
      1e-12 * std::max(1.0, std::abs(reference.duration)))
    throw GridMismatch("durations differ");
  if (coarse.params.k != reference.params.k)
    throw GridMismatch("saddle indices differ");
  const auto ratio =
      integral_ratio(coarse.params.tau, reference.params.tau);
  if (!ratio)
    throw GridMismatch("coarse step is not an integer multiple of the "
                       "reference step");
  if (coarse.step_count() * static_cast<std::size_t>(*ratio) !=
      reference.step_count())
    throw GridMismatch("record counts do not match the step ratio");
  return *ratio;
}

}  // namespace detail

/// Sup-norm trajectory errors of one coarse run against a reference run.
struct ErrorReport {
  double tau = 0.0;
  double err_x = 0.0;
  Vec err_v;  // one entry per direction vector
};

/// Errors maximized over the coarse grid points n = 1..N_T, comparing each
/// coarse record against the reference record at the same time.
inline ErrorReport sup_errors(const Trajectory& coarse,
                              const Trajectory& reference) {
  const long ratio = detail::checked_grid_ratio(coarse, reference);
  const std::size_t k = coarse.params.k;
  ErrorReport report{coarse.params.tau, 0.0, Vec(k, 0.0)};
  for (std::size_t n = 1; n < coarse.records.size(); ++n) {
    const SaddleState& c = coarse.records[n].state;
    const SaddleState& r =
        reference.records[n * static_cast<std::size_t>(ratio)].state;
    report.err_x =
        std::max(report.err_x, distance(c.x.coords(), r.x.coords()));
    for (std::size_t i = 0; i < k; ++i)
      report.err_v[i] =
          std::max(report.err_v[i], distance(c.frame[i], r.frame[i]));
  }
  return report;
}

/// Error table over a ladder of step sizes plus the adjacent-pair rates.
/// rates[r] belongs to the pair (rows[r], rows[r+1]) and holds 1 + k
/// entries, the position column first; a rate is NaN when either error is
/// not strictly positive.
struct RateTable {
  ExperimentConfig config;
  std::vector<ErrorReport> rows;
  std::vector<Vec> rates;
};

namespace detail {

inline double pair_rate(double err_coarse, double err_fine, double tau_coarse,
                        double tau_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0) || !(tau_coarse > tau_fine))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log2(err_coarse / err_fine) / std::log2(tau_coarse / tau_fine);
}

}  // namespace detail

/// Runs the reference and every coarse step size, then forms the error and
/// rate columns.
inline RateTable rate_table(const ExperimentConfig& config,
                            std::size_t max_threads = 1) {
  config.validate();
  if (config.taus.size() < 2)
    throw std::invalid_argument("rate_table needs at least two step sizes");

  std::vector<double> ladder = config.taus;
  ladder.push_back(config.tau_ref);
  std::vector<Trajectory> runs =
      detail::run_batch(config, ladder, false, max_threads);
  const Trajectory& reference = runs.back();

  RateTable table{config, {}, {}};
  table.rows.reserve(config.taus.size());
  for (std::size_t i = 0; i < config.taus.size(); ++i)
    table.rows.push_back(sup_errors(runs[i], reference));

  table.rates.reserve(table.rows.size() - 1);
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const ErrorReport& a = table.rows[r - 1];
    const ErrorReport& b = table.rows[r];
    Vec rate(1 + config.k);
    rate[0] = detail::pair_rate(a.err_x, b.err_x, a.tau, b.tau);
    for (std::size_t i = 0; i < config.k; ++i)
      rate[1 + i] = detail::pair_rate(a.err_v[i], b.err_v[i], a.tau, b.tau);
    table.rates.push_back(std::move(rate));
  }
  return table;
}

/// Quantities below this are indistinguishable from double rounding noise;
/// decay factors computed from them carry no information.
inline constexpr double kLemmaNoiseFloor = 64.0 * DBL_EPSILON;

/// Per-run maxima of the pre-orthonormalization drift quantities.
struct LemmaStats {
  double tau = 0.0;
  double max_norm_drift = 0.0;  // max |‖tilde‖² − 1|
  double max_cross = 0.0;       // max |tilde_m . tilde_i|, m < i; 0 for k = 1
  double max_gs_gap = 0.0;      // max ‖v − tilde‖
  double j_hat = 0.0;           // max recorded Jacobian norm bound
};

/// One failed per-step inequality.
struct BoundViolation {
  std::string check;
  double tau = 0.0;
  std::size_t step = 0;          // record index the step produced
  std::size_t vector_index = 0;  // zero-based
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Decay of the drift maxima across one step-size halving. Factors are
/// stat(2 tau) / stat(tau); a quantity measured at the rounding noise floor
/// on either side is flagged, since its factor is then meaningless.
struct DecayCheck {
  double tau_coarse = 0.0;
  double tau_fine = 0.0;
  double norm_drift_factor = 0.0;
  double cross_factor = 0.0;
  double gs_gap_factor = 0.0;
  bool norm_drift_at_noise_floor = false;
  bool cross_at_noise_floor = false;
  bool gs_gap_at_noise_floor = false;
};

struct LemmaReport {
  std::vector<LemmaStats> stats;         // per step size, decreasing
  std::vector<DecayCheck> decay;         // adjacent pairs
  std::vector<BoundViolation> violations;  // k = 1 hard bounds only
};

namespace detail {

inline double ratio_or_nan(double coarse, double fine) {
  if (!(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return coarse / fine;
}

}  // namespace detail

/// Runs every configured step size with intermediates recorded and collects
/// the drift maxima. For k = 1 the explicit per-step bounds
/// |‖tilde‖² − 1| <= tau² gamma² Jhat² and ‖v − tilde‖ <= tau² gamma² Jhat²
/// are checked against the run's own recorded Jhat; failures are returned,
/// not thrown.
inline LemmaReport lemma_suite(const ExperimentConfig& config,
                               std::size_t max_threads = 1) {
  config.validate();
  LemmaReport report;
  report.stats.reserve(config.taus.size());

  std::vector<Trajectory> runs =
      detail::run_batch(config, config.taus, true, max_threads);
  for (const Trajectory& traj : runs) {
    const double tau = traj.params.tau;
    const double gamma = traj.params.gamma;
    LemmaStats stats;
    stats.tau = tau;
    struct PerStep {
      std::size_t step;
      std::size_t vector_index;
      double drift;
      double gap;
    };
    std::vector<PerStep> per_step;
    for (std::size_t n = 1; n < traj.records.size(); ++n) {
      const auto& inter = traj.records[n].intermediates;
      if (!inter)
        throw std::logic_error("lemma_suite requires recorded intermediates");
      stats.j_hat = std::max(stats.j_hat, inter->neg_hessian_norm);
      const auto& tilde = inter->tilde;
      const DirectionFrame& frame = traj.records[n].state.frame;
      for (std::size_t i = 0; i < tilde.size(); ++i) {
        const double drift = std::abs(dot(tilde[i], tilde[i]) - 1.0);
        const double gap = distance(frame[i], tilde[i]);
        stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
        stats.max_gs_gap = std::max(stats.max_gs_gap, gap);
        for (std::size_t m = 0; m < i; ++m)
          stats.max_cross =
              std::max(stats.max_cross, std::abs(dot(tilde[m], tilde[i])));
        if (config.k == 1) per_step.push_back({n, i, drift, gap});
      }
    }
    const double bound = tau * tau * gamma * gamma * stats.j_hat * stats.j_hat;
    for (const PerStep& s : per_step) {
      if (s.drift > bound)
        report.violations.push_back({"norm-drift-bound", tau, s.step,
                                     s.vector_index, s.drift, bound});
      if (s.gap > bound)
        report.violations.push_back(
            {"gs-gap-bound", tau, s.step, s.vector_index, s.gap, bound});
    }
    report.stats.push_back(stats);
  }

  report.decay.reserve(report.stats.size() > 0 ? report.stats.size() - 1 : 0);
  for (std::size_t r = 1; r < report.stats.size(); ++r) {
    const LemmaStats& a = report.stats[r - 1];
    const LemmaStats& b = report.stats[r];
    DecayCheck check;
    check.tau_coarse = a.tau;
    check.tau_fine = b.tau;
    check.norm_drift_factor =
        detail::ratio_or_nan(a.max_norm_drift, b.max_norm_drift);
    check.cross_factor = detail::ratio_or_nan(a.max_cross, b.max_cross);
    check.gs_gap_factor = detail::ratio_or_nan(a.max_gs_gap, b.max_gs_gap);
    check.norm_drift_at_noise_floor = a.max_norm_drift < kLemmaNoiseFloor ||
                                      b.max_norm_drift < kLemmaNoiseFloor;
    check.cross_at_noise_floor =
        a.max_cross < kLemmaNoiseFloor || b.max_cross < kLemmaNoiseFloor;
    check.gs_gap_at_noise_floor =
        a.max_gs_gap < kLemmaNoiseFloor || b.max_gs_gap < kLemmaNoiseFloor;
    report.decay.push_back(check);
  }
  return report;
}

/// Whole-trajectory convergence toward the finest run plus terminal-state
/// diagnostics of the finest run.
struct PathwayReport {
  std::vector<double> taus;  // full ladder, finest (the reference) last
  // sup over the coarser grid of the position difference, one entry per
  // adjacent ladder pair
  std::vector<double> adjacent_sup_distance;
  // final-time position distance of every non-finest run to the finest run
  std::vector<double> final_state_distance;
  Vec terminal_x;
  double terminal_force_norm = 0.0;
  double terminal_frame_residual = 0.0;
  MorseIndexResult terminal_morse;
};

namespace detail {

/// Sup over the coarse grid of the position difference only. Ratio 1 (equal
/// steps) is allowed and compares identical grids.
inline double sup_x_distance(const Trajectory& coarse,
                             const Trajectory& fine) {
  const long ratio = checked_grid_ratio(coarse, fine);
  double sup = 0.0;
  for (std::size_t n = 1; n < coarse.records.size(); ++n)
    sup = std::max(
        sup, distance(coarse.records[n].state.x.coords(),
                      fine.records[n * static_cast<std::size_t>(ratio)]
                          .state.x.coords()));
  return sup;
}

}  // namespace detail

/// Runs the full step-size ladder (config.taus then tau_ref as the finest),
/// measures the sup position distance across each adjacent pair and each
/// run's final-time distance to the finest run, and classifies the finest
/// run's terminal state. The model must be an energy landscape.
inline PathwayReport pathway_convergence(const ExperimentConfig& config,
                                         std::size_t max_threads = 1) {
  config.validate();
  const auto landscape = make_landscape(config.model);

  PathwayReport report;
  report.taus = config.taus;
  if (!(std::abs(config.taus.back() - config.tau_ref) <=
        1e-12 * config.tau_ref))
    report.taus.push_back(config.tau_ref);
  for (std::size_t i = 1; i < report.taus.size(); ++i)
    if (!detail::integral_ratio(report.taus[i - 1], report.taus[i]))
      throw GridMismatch("adjacent ladder steps are not nested");

  std::vector<Trajectory> runs =
      detail::run_batch(config, report.taus, false, max_threads);

  report.adjacent_sup_distance.reserve(runs.size() - 1);
  for (std::size_t i = 1; i < runs.size(); ++i)
    report.adjacent_sup_distance.push_back(
        detail::sup_x_distance(runs[i - 1], runs[i]));

  const Trajectory& finest = runs.back();
  const SaddleState& terminal = finest.records.back().state;
  report.final_state_distance.reserve(runs.size() - 1);
  for (std::size_t i = 0; i + 1 < runs.size(); ++i)
    report.final_state_distance.push_back(
        distance(runs[i].records.back().state.x.coords(),
                 terminal.x.coords()));

  report.terminal_x = terminal.x.coords();
  const auto residual = stationarity_residual(terminal, *landscape);
  report.terminal_force_norm = residual.first;
  report.terminal_frame_residual = residual.second;
  report.terminal_morse = morse_index(negated(landscape->neg_hessian(terminal.x)));
  return report;
}

}  // namespace hisd
