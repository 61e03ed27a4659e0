#include <cmath>
#include <random>

#include "doctest.h"
#include "hisd/landscape.hpp"
#include "hisd/linalg.hpp"
#include "hisd/surfaces.hpp"

using namespace hisd;

TEST_CASE("points validate their coordinates") {
  CHECK_THROWS_AS(Point(Vec{1.0, std::nan("")}), NonFinitePoint);
  CHECK_THROWS_AS(Point(Vec{INFINITY}), NonFinitePoint);
  const Point p(Vec{1.0, -2.0});
  CHECK(p.size() == 2);
  CHECK(p[1] == -2.0);
}

TEST_CASE("two-well two-peak surface values") {
  const MinyaevQuapp mq;
  CHECK(mq.dimension() == 2);
  CHECK(mq.energy(Point(Vec{0.0, 0.0})) == doctest::Approx(2.57).epsilon(1e-14));
  const double half_pi = std::acos(0.0);
  CHECK(mq.energy(Point(Vec{half_pi, half_pi})) ==
        doctest::Approx(-1.43).epsilon(1e-12));
  CHECK(mq.energy(Point(Vec{1.0, 1.0})) ==
        doctest::Approx(-0.2622936730942848).epsilon(1e-15));

  const Vec f = mq.force(Point(Vec{half_pi / 2.0, 0.0}));
  CHECK(f[0] == doctest::Approx(3.14).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(-1.14).epsilon(1e-12));

  const Matrix j0 = mq.neg_hessian(Point(Vec{0.0, 0.0}));
  CHECK(j0(0, 0) == doctest::Approx(6.28).epsilon(1e-14));
  CHECK(j0(0, 1) == doctest::Approx(-2.28).epsilon(1e-14));
  CHECK(j0(1, 0) == j0(0, 1));
  CHECK(j0(1, 1) == j0(0, 0));

  const Matrix j1 = mq.neg_hessian(Point(Vec{1.0, 1.0}));
  CHECK(j1(0, 0) == doctest::Approx(0.6154126538114304).epsilon(1e-12));
  CHECK(j1(0, 1) == doctest::Approx(-2.28).epsilon(1e-14));
  CHECK(is_symmetric_as_stored(j1));

  CHECK_THROWS_AS(mq.energy(Point(Vec{1.0, 2.0, 3.0})), DimensionMismatch);
}

TEST_CASE("double-gaussian surface values and symmetry") {
  const Eckhardt eck;
  CHECK(eck.dimension() == 2);
  CHECK(eck.energy(Point(Vec{0.0, 0.0})) ==
        doctest::Approx(2.0 / std::exp(1.0) + 4.0).epsilon(1e-15));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double x1 = u(rng);
    const double x2 = u(rng);
    // even in x1, bitwise: every x1 dependence is through x1^2
    CHECK(eck.energy(Point(Vec{x1, x2})) == eck.energy(Point(Vec{-x1, x2})));
    const Vec f = eck.force(Point(Vec{x1, x2}));
    const Vec g = eck.force(Point(Vec{-x1, x2}));
    CHECK(f[0] == -g[0]);
    CHECK(f[1] == g[1]);
    const Matrix j = eck.neg_hessian(Point(Vec{x1, x2}));
    CHECK(is_symmetric_as_stored(j));
  }
}

TEST_CASE("toy rotational field") {
  const ToyRotational toy;
  CHECK(toy.rotation_strength() == 1.0);
  const Vec f = toy.force(Point(Vec{1.0, 0.0}));
  CHECK(f == Vec{-1.0, -1.0});
  const ToyRotational strong(3.0);
  const Matrix j = strong.jacobian(Point(Vec{5.0, 5.0}));
  CHECK(j(0, 1) == 3.0);
  CHECK(j(1, 0) == -3.0);
}

TEST_CASE("model factories") {
  CHECK(landscape_names() ==
        std::vector<std::string>{"eckhardt", "minyaev-quapp"});
  CHECK(system_names() == std::vector<std::string>{"eckhardt",
                                                   "minyaev-quapp",
                                                   "toy-rotational"});
  CHECK_THROWS_AS(make_landscape("no-such-surface"), UnknownModel);
  CHECK_THROWS_AS(make_landscape("toy-rotational"), UnknownModel);
  CHECK_THROWS_AS(make_system("no-such-surface"), UnknownModel);
  CHECK(make_landscape("eckhardt")->dimension() == 2);
  CHECK(make_system("toy-rotational")->dimension() == 2);
}

TEST_CASE("gradient systems expose the negative hessian as jacobian") {
  const auto land = make_landscape("minyaev-quapp");
  const GradientSystemAdapter sys(land);
  const Point x(Vec{0.7, -0.3});
  CHECK(sys.force(x) == land->force(x));
  const Matrix a = sys.jacobian(x);
  const Matrix b = land->neg_hessian(x);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(a(i, j) == b(i, j));

  const auto via_factory = make_system("minyaev-quapp");
  CHECK(via_factory->force(x) == land->force(x));
}
