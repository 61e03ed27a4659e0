#pragma once

// Built-in benchmark models: two 2D energy surfaces with hand-derived
// analytic derivatives, one linear non-gradient system, and a name registry
// for command-line lookup.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hisd/landscape.hpp"

namespace hisd {

/// Thrown when a registry lookup names no built-in model.
class UnknownModel : public std::invalid_argument {
 public:
  explicit UnknownModel(const std::string& name)
      : std::invalid_argument("unknown model \"" + name + "\"") {}
};

/// Periodic two-well test surface
///   E(x) = cos(2 x1) + cos(2 x2) + 0.57 cos(2 x1 - 2 x2).
class MinyaevQuapp final : public EnergyLandscape {
 public:
  std::size_t dimension() const override { return 2; }

  double energy(const Point& x) const override {
    require_dimension(x);
    return std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]) +
           0.57 * std::cos(2.0 * x[0] - 2.0 * x[1]);
  }

  Vec force(const Point& x) const override {
    require_dimension(x);
    const double s = std::sin(2.0 * x[0] - 2.0 * x[1]);
    return {2.0 * std::sin(2.0 * x[0]) + 1.14 * s,
            2.0 * std::sin(2.0 * x[1]) - 1.14 * s};
  }

  Matrix neg_hessian(const Point& x) const override {
    require_dimension(x);
    const double c = std::cos(2.0 * x[0] - 2.0 * x[1]);
    const double off = -2.28 * c;
    Matrix j(2, 2);
    j(0, 0) = 4.0 * std::cos(2.0 * x[0]) + 2.28 * c;
    j(1, 1) = 4.0 * std::cos(2.0 * x[1]) + 2.28 * c;
    j(0, 1) = off;
    j(1, 0) = off;
    return j;
  }
};

/// Three Gaussian bumps over a parabolic valley
///   E(x) = exp(-x1^2 - (x2+1)^2) + exp(-x1^2 - (x2-1)^2)
///        + 4 exp(-3 (x1^2 + x2^2) / 2) + x2^2 / 2.
class Eckhardt final : public EnergyLandscape {
 public:
  std::size_t dimension() const override { return 2; }

  double energy(const Point& x) const override {
    require_dimension(x);
    const Bumps b = bumps(x);
    return b.g1 + b.g2 + 4.0 * b.g3 + 0.5 * x[1] * x[1];
  }

  Vec force(const Point& x) const override {
    require_dimension(x);
    const Bumps b = bumps(x);
    const double x1 = x[0];
    const double x2 = x[1];
    return {2.0 * x1 * (b.g1 + b.g2) + 12.0 * x1 * b.g3,
            2.0 * (x2 + 1.0) * b.g1 + 2.0 * (x2 - 1.0) * b.g2 +
                12.0 * x2 * b.g3 - x2};
  }

  Matrix neg_hessian(const Point& x) const override {
    require_dimension(x);
    const Bumps b = bumps(x);
    const double x1 = x[0];
    const double x2 = x[1];
    const double off = -4.0 * x1 * (x2 + 1.0) * b.g1 -
                       4.0 * x1 * (x2 - 1.0) * b.g2 - 36.0 * x1 * x2 * b.g3;
    Matrix j(2, 2);
    j(0, 0) = (2.0 - 4.0 * x1 * x1) * (b.g1 + b.g2) +
              (12.0 - 36.0 * x1 * x1) * b.g3;
    j(1, 1) = (2.0 - 4.0 * (x2 + 1.0) * (x2 + 1.0)) * b.g1 +
              (2.0 - 4.0 * (x2 - 1.0) * (x2 - 1.0)) * b.g2 +
              (12.0 - 36.0 * x2 * x2) * b.g3 - 1.0;
    j(0, 1) = off;
    j(1, 0) = off;
    return j;
  }

 private:
  struct Bumps {
    double g1, g2, g3;
  };

  static Bumps bumps(const Point& x) {
    const double x1sq = x[0] * x[0];
    return {std::exp(-x1sq - (x[1] + 1.0) * (x[1] + 1.0)),
            std::exp(-x1sq - (x[1] - 1.0) * (x[1] - 1.0)),
            std::exp(-1.5 * (x1sq + x[1] * x[1]))};
  }
};

/// Linear spiral sink F(x) = (-x1 + a x2, -a x1 - x2). Its Jacobian is
/// constant and non-symmetric for a != 0, which makes it the minimal
/// non-gradient test system.
class ToyRotational final : public DynamicalSystem {
 public:
  explicit ToyRotational(double a = 1.0) : a_(a) {}

  std::size_t dimension() const override { return 2; }

  Vec force(const Point& x) const override {
    require_dimension(x);
    return {-x[0] + a_ * x[1], -a_ * x[0] - x[1]};
  }

  Matrix jacobian(const Point& x) const override {
    require_dimension(x);
    Matrix j(2, 2);
    j(0, 0) = -1.0;
    j(0, 1) = a_;
    j(1, 0) = -a_;
    j(1, 1) = -1.0;
    return j;
  }

  double rotation_strength() const { return a_; }

 private:
  double a_;
};

inline std::vector<std::string> landscape_names() {
  return {"eckhardt", "minyaev-quapp"};
}

inline std::vector<std::string> system_names() {
  return {"eckhardt", "minyaev-quapp", "toy-rotational"};
}

/// Looks up an energy landscape by registry name.
inline std::shared_ptr<const EnergyLandscape> make_landscape(
    const std::string& name) {
  if (name == "minyaev-quapp") return std::make_shared<MinyaevQuapp>();
  if (name == "eckhardt") return std::make_shared<Eckhardt>();
  throw UnknownModel(name);
}

/// Looks up a dynamical system by registry name; gradient models are wrapped
/// in the adapter.
inline std::shared_ptr<const DynamicalSystem> make_system(
    const std::string& name) {
  if (name == "toy-rotational") return std::make_shared<ToyRotational>();
  return std::make_shared<GradientSystemAdapter>(make_landscape(name));
}

}  // namespace hisd
