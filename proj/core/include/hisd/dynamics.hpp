#pragma once

// Index-k saddle dynamics: direction frames, the sequential Gram-Schmidt
// normalization, explicit Euler steppers for gradient and non-gradient
// systems, trajectory integration, and stationary-point diagnostics.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hisd/landscape.hpp"
#include "hisd/linalg.hpp"

namespace hisd {

inline constexpr double kFrameUnitTol = 1e-12;
inline constexpr double kFrameOrthoTol = 1e-12;
inline constexpr double kGramSchmidtEps = 1e-10;

/// Thrown when a direction frame violates its orthonormality invariants on
/// construction.
class FrameError : public std::invalid_argument {
 public:
  explicit FrameError(const std::string& detail)
      : std::invalid_argument("invalid direction frame: " + detail) {}
};

/// Thrown when the requested duration is not an integer number of steps.
class NonIntegerStepCount : public std::invalid_argument {
 public:
  NonIntegerStepCount(double tau, double duration)
      : std::invalid_argument(
            "duration " + std::to_string(duration) +
            " is not an integer multiple of the step size " +
            std::to_string(tau)) {}
};

/// Ordered orthonormal set of k direction vectors in R^N, k <= N. The
/// invariants are enforced on every construction, so holding a frame is proof
/// of orthonormality.
class DirectionFrame {
 public:
  explicit DirectionFrame(std::vector<Vec> vectors) : v_(std::move(vectors)) {
    validate();
  }

  std::size_t count() const { return v_.size(); }
  std::size_t dimension() const { return v_.front().size(); }
  const Vec& operator[](std::size_t i) const { return v_[i]; }
  const std::vector<Vec>& vectors() const { return v_; }

 private:
  void validate() const {
    if (v_.empty()) throw FrameError("frame must hold at least one vector");
    const std::size_t n = v_.front().size();
    if (v_.size() > n)
      throw FrameError("more vectors than space dimensions (k > N)");
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i].size() != n) throw FrameError("mixed vector dimensions");
      if (!all_finite(v_[i])) throw FrameError("non-finite entries");
      const double len = norm(v_[i]);
      if (std::abs(len - 1.0) > kFrameUnitTol) {
        std::ostringstream os;
        os << "vector " << i + 1 << " has norm " << len;
        throw FrameError(os.str());
      }
      for (std::size_t j = 0; j < i; ++j) {
        const double overlap = dot(v_[i], v_[j]);
        if (std::abs(overlap) > kFrameOrthoTol) {
          std::ostringstream os;
          os << "vectors " << j + 1 << " and " << i + 1 << " overlap by "
             << overlap;
          throw FrameError(os.str());
        }
      }
    }
  }

  std::vector<Vec> v_;
};

/// Position plus direction frame at a point in time.
struct SaddleState {
  double t;
  Point x;
  DirectionFrame frame;

  SaddleState(double time, Point position, DirectionFrame directions)
      : t(time), x(std::move(position)), frame(std::move(directions)) {
    if (frame.dimension() != x.size())
      throw DimensionMismatch("saddle state frame", x.size(),
                              frame.dimension());
  }
};

enum class Mode { kHiSD, kGHiSD };

/// Scheme parameters for one integration. In GHiSD mode the relaxation
/// constants are fixed to 1 and the steppers reject anything else.
struct SchemeParams {
  double beta = 1.0;
  double gamma = 1.0;
  double tau = 0.0;
  std::size_t k = 1;
  Mode mode = Mode::kHiSD;
  // Keeps the step factor off the lower-index projection sum of the
  // non-gradient direction update, which leaves that sum undamped. Off by
  // default: the damped update is the one consistent with the continuous
  // dynamics. Ignored in HiSD mode.
  bool ghisd_literal_bracket = false;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("beta must be positive and finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("gamma must be positive and finite");
    if (!(tau > 0.0) || !std::isfinite(tau))
      throw std::invalid_argument("tau must be positive and finite");
    if (k < 1) throw std::invalid_argument("saddle index k must be at least 1");
  }
};

/// Optional per-step working quantities, recorded for the property suites.
struct StepIntermediates {
  std::vector<Vec> tilde;   // directions before orthonormalization
  Vec y;                    // Gram-Schmidt normalizers, all > 0
  double neg_hessian_norm;  // operator-norm bound of J at the step's start
};

struct StepRecord {
  SaddleState state;
  std::optional<StepIntermediates> intermediates;
};

/// Time-ordered integration result; records[0] is the initial condition and
/// records[n].state.t == initial t + n * tau.
struct Trajectory {
  SchemeParams params;
  double duration = 0.0;
  std::vector<StepRecord> records;

  std::size_t step_count() const {
    return records.empty() ? 0 : records.size() - 1;
  }
};

/// Thrown when Gram-Schmidt meets (numerically) linearly dependent
/// directions. When raised inside a trajectory run it carries the step index
/// and the completed part of the trajectory.
class DegenerateFrame : public std::runtime_error {
 public:
  DegenerateFrame(std::size_t vector_index, double y, long step = -1,
                  std::shared_ptr<const Trajectory> partial = nullptr)
      : std::runtime_error(message(vector_index, y, step)),
        vector_index_(vector_index),
        y_(y),
        step_(step),
        partial_(std::move(partial)) {}

  /// Zero-based index of the direction whose normalizer collapsed.
  std::size_t vector_index() const { return vector_index_; }
  double y() const { return y_; }
  /// Step at which integration aborted, -1 outside a trajectory run.
  long step() const { return step_; }
  /// Records completed before the failing step; null outside a run.
  const std::shared_ptr<const Trajectory>& partial() const { return partial_; }

 private:
  static std::string message(std::size_t vector_index, double y, long step) {
    std::ostringstream os;
    os << "degenerate direction frame: normalizer of vector "
       << vector_index + 1 << " is " << y;
    if (step >= 0) os << " at step " << step;
    return os.str();
  }

  std::size_t vector_index_;
  double y_;
  long step_;
  std::shared_ptr<const Trajectory> partial_;
};

struct GramSchmidtResult {
  DirectionFrame frame;
  Vec y;
};

/// Classical Gram-Schmidt, sequential in the vector index, with each
/// projection coefficient taken against the input vector. No
/// re-orthogonalization passes: the normalizers y are exactly the quantities
/// the per-step bounds control, and a normalizer at or below eps means the
/// directions have lost linear independence.
inline GramSchmidtResult gram_schmidt(const std::vector<Vec>& tilde,
                                      double eps = kGramSchmidtEps) {
  if (tilde.empty())
    throw std::invalid_argument("gram_schmidt requires at least one vector");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const std::size_t n = tilde.front().size();
  if (tilde.size() > n)
    throw std::invalid_argument("gram_schmidt: more vectors than dimensions");

  std::vector<Vec> v;
  v.reserve(tilde.size());
  Vec y(tilde.size());
  for (std::size_t i = 0; i < tilde.size(); ++i) {
    if (tilde[i].size() != n)
      throw DimensionMismatch("gram_schmidt input", n, tilde[i].size());
    Vec r = tilde[i];
    for (std::size_t j = 0; j < i; ++j) axpy(r, -dot(tilde[i], v[j]), v[j]);
    y[i] = norm(r);
    if (!(y[i] > eps)) throw DegenerateFrame(i, y[i]);
    Vec unit(n);
    for (std::size_t l = 0; l < n; ++l) unit[l] = r[l] / y[i];
    v.push_back(std::move(unit));
  }
  try {
    return {DirectionFrame(std::move(v)), std::move(y)};
  } catch (const FrameError&) {
    // Normalizers above eps but output still not orthonormal: the inputs
    // were too close to dependence for a single classical pass.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
      if (y[i] < y[worst]) worst = i;
    throw DegenerateFrame(worst, y[worst]);
  }
}

namespace detail {

/// x + scale * (f - 2 sum_j (v_j . f) v_j).
inline Vec reflected_step(const Vec& x, const std::vector<Vec>& frame,
                          const Vec& f, double scale) {
  Vec g = f;
  for (const Vec& v : frame) axpy(g, -2.0 * dot(v, f), v);
  Vec next = x;
  axpy(next, scale, g);
  return next;
}

/// Elementwise w + w. Used instead of 2 * w so the gradient stepper and the
/// symmetrized non-gradient stepper perform identical arithmetic.
inline Vec self_summed(const Vec& w) {
  Vec r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[i] + w[i];
  return r;
}

inline Vec summed(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

/// v_i + scale * (w - (v_i . w) v_i - sum_{j<i} (v_j . s) v_j). The rotation
/// source w and the projection source s are passed separately: the gradient
/// stepper feeds s = w + w while the non-gradient stepper feeds the
/// symmetrized Jacobian action.
inline Vec rotated_direction(const std::vector<Vec>& frame, std::size_t i,
                             const Vec& w, const Vec& s, double scale) {
  Vec u = w;
  axpy(u, -dot(frame[i], w), frame[i]);
  for (std::size_t j = 0; j < i; ++j) axpy(u, -dot(frame[j], s), frame[j]);
  Vec tilde = frame[i];
  axpy(tilde, scale, u);
  return tilde;
}

/// Literal-bracket variant: the projection sum enters without the step
/// factor. Coincides with rotated_direction for i = 0.
inline Vec rotated_direction_literal(const std::vector<Vec>& frame,
                                     std::size_t i, const Vec& w, const Vec& s,
                                     double scale) {
  Vec u = w;
  axpy(u, -dot(frame[i], w), frame[i]);
  Vec tilde = frame[i];
  axpy(tilde, scale, u);
  for (std::size_t j = 0; j < i; ++j) axpy(tilde, -dot(frame[j], s), frame[j]);
  return tilde;
}

inline void require_step_inputs(const SaddleState& s, const SchemeParams& p,
                                std::size_t model_dimension) {
  p.validate();
  if (p.k != s.frame.count())
    throw std::invalid_argument("params.k does not match the frame size");
  if (model_dimension != s.x.size())
    throw DimensionMismatch("stepper model", s.x.size(), model_dimension);
}

}  // namespace detail

/// One explicit Euler step of index-k saddle dynamics on an energy
/// landscape. All right-hand sides are evaluated at the incoming state.
inline StepRecord step_hisd(const SaddleState& s, const SchemeParams& p,
                            const EnergyLandscape& landscape,
                            bool record_intermediates = false) {
  if (p.mode != Mode::kHiSD)
    throw std::invalid_argument("step_hisd requires HiSD mode");
  detail::require_step_inputs(s, p, landscape.dimension());

  const Vec f = landscape.force(s.x);
  const Matrix j = landscape.neg_hessian(s.x);

  Vec next_x = detail::reflected_step(s.x.coords(), s.frame.vectors(), f,
                                      p.tau * p.beta);

  const double scale = p.tau * p.gamma;
  std::vector<Vec> tilde(p.k);
  for (std::size_t i = 0; i < p.k; ++i) {
    const Vec w = matvec(j, s.frame[i]);
    const Vec sym = detail::self_summed(w);
    tilde[i] = detail::rotated_direction(s.frame.vectors(), i, w, sym, scale);
  }
  GramSchmidtResult gs = gram_schmidt(tilde);

  StepRecord rec{
      SaddleState(s.t + p.tau, Point(std::move(next_x)), std::move(gs.frame)),
      std::nullopt};
  if (record_intermediates)
    rec.intermediates = StepIntermediates{std::move(tilde), std::move(gs.y),
                                          spectral_norm_bound(j)};
  return rec;
}

/// One explicit Euler step of the non-gradient generalization. The direction
/// update rotates with the Jacobian action and projects with its symmetrized
/// action; relaxation constants are fixed to 1.
inline StepRecord step_ghisd(const SaddleState& s, const SchemeParams& p,
                             const DynamicalSystem& system,
                             bool record_intermediates = false) {
  if (p.mode != Mode::kGHiSD)
    throw std::invalid_argument("step_ghisd requires GHiSD mode");
  if (p.beta != 1.0 || p.gamma != 1.0)
    throw std::invalid_argument(
        "the non-gradient dynamics carries no relaxation constants; "
        "beta and gamma must be 1");
  detail::require_step_inputs(s, p, system.dimension());

  const Vec f = system.force(s.x);
  const Matrix j = system.jacobian(s.x);

  Vec next_x =
      detail::reflected_step(s.x.coords(), s.frame.vectors(), f, p.tau);

  std::vector<Vec> tilde(p.k);
  for (std::size_t i = 0; i < p.k; ++i) {
    const Vec w = matvec(j, s.frame[i]);
    const Vec sym = detail::summed(w, matvec_transposed(j, s.frame[i]));
    tilde[i] =
        p.ghisd_literal_bracket
            ? detail::rotated_direction_literal(s.frame.vectors(), i, w, sym,
                                                p.tau)
            : detail::rotated_direction(s.frame.vectors(), i, w, sym, p.tau);
  }
  GramSchmidtResult gs = gram_schmidt(tilde);

  StepRecord rec{
      SaddleState(s.t + p.tau, Point(std::move(next_x)), std::move(gs.frame)),
      std::nullopt};
  if (record_intermediates)
    rec.intermediates = StepIntermediates{std::move(tilde), std::move(gs.y),
                                          spectral_norm_bound(j)};
  return rec;
}

namespace detail {

template <class StepFn>
Trajectory run_impl(const SaddleState& initial, const SchemeParams& p,
                    double duration, StepFn&& step) {
  p.validate();
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("duration must be positive and finite");
  const long n_steps = std::lround(duration / p.tau);
  const double fitted = static_cast<double>(n_steps) * p.tau;
  if (n_steps < 1 ||
      std::abs(fitted - duration) > 1e-9 * std::max(1.0, std::abs(duration)))
    throw NonIntegerStepCount(p.tau, duration);

  Trajectory traj{p, duration, {}};
  traj.records.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.records.push_back(StepRecord{initial, std::nullopt});
  for (long n = 1; n <= n_steps; ++n) {
    try {
      StepRecord rec = step(traj.records.back().state);
      // Uniform grid by multiplication, immune to additive rounding drift.
      rec.state.t = initial.t + static_cast<double>(n) * p.tau;
      traj.records.push_back(std::move(rec));
    } catch (const DegenerateFrame& e) {
      throw DegenerateFrame(e.vector_index(), e.y(), n,
                            std::make_shared<Trajectory>(std::move(traj)));
    }
  }
  return traj;
}

}  // namespace detail

/// Integrates index-k saddle dynamics over [initial.t, initial.t + duration].
/// The duration must be an integer number of steps.
inline Trajectory run_trajectory(const SaddleState& initial,
                                 const SchemeParams& p,
                                 const EnergyLandscape& landscape,
                                 double duration,
                                 bool record_intermediates = false) {
  return detail::run_impl(initial, p, duration, [&](const SaddleState& s) {
    return step_hisd(s, p, landscape, record_intermediates);
  });
}

/// Non-gradient overload.
inline Trajectory run_trajectory(const SaddleState& initial,
                                 const SchemeParams& p,
                                 const DynamicalSystem& system,
                                 double duration,
                                 bool record_intermediates = false) {
  return detail::run_impl(initial, p, duration, [&](const SaddleState& s) {
    return step_ghisd(s, p, system, record_intermediates);
  });
}

struct MorseIndexResult {
  int index;
  bool near_singular;  // some |eigenvalue| <= tol; diagnostic, not fatal
  Vec eigenvalues;     // ascending
};

inline double default_morse_tolerance(const Matrix& hessian) {
  return 1e-8 * (1.0 + frobenius_norm(hessian));
}

/// Counts Hessian eigenvalues strictly below -tol. Callers pass the Hessian
/// of the energy, not its negation.
inline MorseIndexResult morse_index(const Matrix& hessian, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  Vec eigs = symmetric_eigenvalues(hessian);
  int index = 0;
  bool near_singular = false;
  for (double e : eigs) {
    if (e < -tol) ++index;
    if (std::abs(e) <= tol) near_singular = true;
  }
  return {index, near_singular, std::move(eigs)};
}

inline MorseIndexResult morse_index(const Matrix& hessian) {
  return morse_index(hessian, default_morse_tolerance(hessian));
}

/// Terminal-state diagnostic: the force norm and the worst misalignment of
/// the frame with the invariant directions, max_i ||(I - v_i v_i^T) J v_i||.
/// Both vanish at a converged saddle with an eigenvector frame.
inline std::pair<double, double> stationarity_residual(
    const SaddleState& s, const EnergyLandscape& landscape) {
  const Vec f = landscape.force(s.x);
  const Matrix j = landscape.neg_hessian(s.x);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.frame.count(); ++i) {
    Vec r = matvec(j, s.frame[i]);
    axpy(r, -dot(s.frame[i], r), s.frame[i]);
    worst = std::max(worst, norm(r));
  }
  return {norm(f), worst};
}

}  // namespace hisd
