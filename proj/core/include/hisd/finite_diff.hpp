#pragma once

// Central finite differences. These are the independent oracle the analytic
// derivatives are tested against, so they deliberately share no code with the
// surface implementations.

#include <stdexcept>
#include <utility>

#include "hisd/landscape.hpp"
#include "hisd/linalg.hpp"

namespace hisd {

inline constexpr double kDefaultFdStep = 1e-5;

namespace detail {
inline void require_positive_step(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

inline Point shifted(const Point& x, std::size_t i, double delta) {
  Vec c = x.coords();
  c[i] += delta;
  return Point(std::move(c));
}
}  // namespace detail

/// Central-difference gradient of a scalar field, one coordinate at a time.
template <class ScalarField>
Vec fd_gradient(ScalarField&& f, const Point& x, double h = kDefaultFdStep) {
  detail::require_positive_step(h);
  const std::size_t n = x.size();
  Vec g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = f(detail::shifted(x, i, +h));
    const double fm = f(detail::shifted(x, i, -h));
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Central-difference Jacobian of a vector field; column j differentiates
/// against coordinate j.
template <class VectorField>
Matrix fd_jacobian(VectorField&& field, const Point& x,
                   double h = kDefaultFdStep) {
  detail::require_positive_step(h);
  const std::size_t n = x.size();
  Matrix jac;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec fp = field(detail::shifted(x, j, +h));
    const Vec fm = field(detail::shifted(x, j, -h));
    if (fp.size() != fm.size())
      throw std::invalid_argument("field output dimension varies");
    if (j == 0) jac = Matrix(fp.size(), n);
    if (fp.size() != jac.rows())
      throw std::invalid_argument("field output dimension varies");
    for (std::size_t i = 0; i < fp.size(); ++i)
      jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

/// Central-difference Hessian of a scalar field; symmetric as stored because
/// each off-diagonal pair is assigned from one stencil evaluation.
template <class ScalarField>
Matrix fd_hessian(ScalarField&& f, const Point& x, double h = kDefaultFdStep) {
  detail::require_positive_step(h);
  const std::size_t n = x.size();
  Matrix hess(n, n);
  const double f0 = f(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = f(detail::shifted(x, i, +h));
    const double fm = f(detail::shifted(x, i, -h));
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec cpp = x.coords();
      cpp[i] += h;
      cpp[j] += h;
      Vec cpm = x.coords();
      cpm[i] += h;
      cpm[j] -= h;
      Vec cmp = x.coords();
      cmp[i] -= h;
      cmp[j] += h;
      Vec cmm = x.coords();
      cmm[i] -= h;
      cmm[j] -= h;
      const double mixed =
          (f(Point(std::move(cpp))) - f(Point(std::move(cpm))) -
           f(Point(std::move(cmp))) + f(Point(std::move(cmm)))) /
          (4.0 * h * h);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  return hess;
}

}  // namespace hisd
