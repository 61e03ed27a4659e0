#include <cmath>

#include "doctest.h"
#include "hisd/finite_diff.hpp"
#include "hisd/linalg.hpp"
#include "hisd/surfaces.hpp"

using namespace hisd;

TEST_CASE("gradient of a separable quadratic") {
  const auto f = [](const Point& p) { return p[0] * p[0]; };
  const Vec g = fd_gradient(f, Point(Vec{3.0, 0.0}));
  CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(std::abs(g[1]) < 1e-9);
}

TEST_CASE("jacobian of a linear field recovers the matrix") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 3.0;
  a(1, 1) = 4.0;
  const auto field = [&](const Point& p) { return matvec(a, p.coords()); };
  const Matrix j = fd_jacobian(field, Point(Vec{0.3, -1.7}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(j(i, c) == doctest::Approx(a(i, c)).epsilon(1e-9));
}

TEST_CASE("hessian of a quadratic form") {
  // f = x^2 + 3xy + 5y^2, hessian [[2,3],[3,10]]
  const auto f = [](const Point& p) {
    return p[0] * p[0] + 3.0 * p[0] * p[1] + 5.0 * p[1] * p[1];
  };
  const Matrix h = fd_hessian(f, Point(Vec{0.7, -0.2}));
  CHECK(is_symmetric_as_stored(h));
  CHECK(h(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(h(0, 1) == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(h(1, 1) == doctest::Approx(10.0).epsilon(1e-5));
}

TEST_CASE("toy rotational jacobian matches its finite difference") {
  const ToyRotational toy(2.5);
  const auto field = [&](const Point& p) { return toy.force(p); };
  const Point x(Vec{0.4, -0.9});
  const Matrix analytic = toy.jacobian(x);
  const Matrix fd = fd_jacobian(field, x);
  CHECK(analytic(0, 0) == -1.0);
  CHECK(analytic(0, 1) == 2.5);
  CHECK(analytic(1, 0) == -2.5);
  CHECK(analytic(1, 1) == -1.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(fd(i, j) == doctest::Approx(analytic(i, j)).epsilon(1e-9));
}

TEST_CASE("step must be positive") {
  const auto f = [](const Point& p) { return p[0]; };
  CHECK_THROWS_AS(fd_gradient(f, Point(Vec{1.0}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_hessian(f, Point(Vec{1.0}), -1e-5),
                  std::invalid_argument);
}

TEST_CASE("surface derivatives agree with finite differences") {
  for (const std::string& name : landscape_names()) {
    CAPTURE(name);
    const auto land = make_landscape(name);
    const auto energy = [&](const Point& p) { return land->energy(p); };
    const Vec points[] = {{0.3, -0.4}, {-1.2, 0.9}, {2.1, 2.7}, {-2.8, -1.1}};
    for (const Vec& coords : points) {
      const Point x(coords);
      const Vec force = land->force(x);
      Vec residual = fd_gradient(energy, x);
      axpy(residual, 1.0, force);  // force + grad E should vanish
      CHECK(norm(residual) <= 1e-6 * (1.0 + norm(force)));

      const Matrix analytic = land->neg_hessian(x);
      const Matrix fd = fd_hessian(energy, x);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          CHECK(std::abs(analytic(i, j) + fd(i, j)) <= 1e-4);
    }
  }
}
