#pragma once

// Model abstractions: energy landscapes with analytic derivatives, and
// general dynamical systems whose Jacobian need not be symmetric.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <utility>

#include "hisd/linalg.hpp"

namespace hisd {

/// Thrown when a position with NaN or infinite entries is constructed,
/// which is how a diverging integration fails loudly.
class NonFinitePoint : public std::invalid_argument {
 public:
  NonFinitePoint() : std::invalid_argument("position has non-finite entries") {}
};

/// Validated position: finite entries are enforced at construction so the
/// numerical kernels can assume clean inputs.
class Point {
 public:
  explicit Point(Vec coords) : coords_(std::move(coords)) {
    if (!all_finite(coords_)) throw NonFinitePoint();
  }

  const Vec& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Energy surface with analytic first and second derivatives. force() is the
/// negative gradient and neg_hessian() the negated Hessian, symmetric as
/// stored.
class EnergyLandscape {
 public:
  virtual ~EnergyLandscape() = default;

  virtual std::size_t dimension() const = 0;
  virtual double energy(const Point& x) const = 0;
  virtual Vec force(const Point& x) const = 0;
  virtual Matrix neg_hessian(const Point& x) const = 0;

 protected:
  void require_dimension(const Point& x) const {
    if (x.size() != dimension())
      throw DimensionMismatch("landscape input", dimension(), x.size());
  }
};

/// Autonomous first-order system: a force field and its (generally
/// non-symmetric) Jacobian.
class DynamicalSystem {
 public:
  virtual ~DynamicalSystem() = default;

  virtual std::size_t dimension() const = 0;
  virtual Vec force(const Point& x) const = 0;
  virtual Matrix jacobian(const Point& x) const = 0;

 protected:
  void require_dimension(const Point& x) const {
    if (x.size() != dimension())
      throw DimensionMismatch("system input", dimension(), x.size());
  }
};

/// Presents an energy landscape as a dynamical system. The force field is a
/// gradient field, so its Jacobian equals the negated Hessian exactly.
class GradientSystemAdapter final : public DynamicalSystem {
 public:
  explicit GradientSystemAdapter(std::shared_ptr<const EnergyLandscape> base)
      : base_(std::move(base)) {
    if (!base_) throw std::invalid_argument("adapter requires a landscape");
  }

  std::size_t dimension() const override { return base_->dimension(); }
  Vec force(const Point& x) const override { return base_->force(x); }
  Matrix jacobian(const Point& x) const override { return base_->neg_hessian(x); }

  const EnergyLandscape& base() const { return *base_; }

 private:
  std::shared_ptr<const EnergyLandscape> base_;
};

}  // namespace hisd
