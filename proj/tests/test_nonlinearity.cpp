#include <doctest.h>

#include <cmath>
#include <random>

#include "kg/nonlinearity.hpp"

using namespace kg;

TEST_CASE("pure power basics") {
  auto spec = NonlinearitySpec::pure_power(3.0, 1);
  CHECK(spec.f(2.0) == doctest::Approx(8.0));
  CHECK(spec.f(-2.0) == doctest::Approx(-8.0));
  CHECK(spec.F(2.0) == doctest::Approx(4.0));
  CHECK(spec.F(-2.0) == doctest::Approx(4.0));
  CHECK(spec.fprime(2.0) == doctest::Approx(12.0));
  CHECK(spec.gamma() == doctest::Approx(1.0));
  CHECK(spec.theta() == doctest::Approx(3.0));
  CHECK(spec.beta_holder() == doctest::Approx(1.0));
  CHECK_FALSE(spec.is_zero());
}

TEST_CASE("non-integer exponents and odd symmetry") {
  auto spec = NonlinearitySpec::pure_power(2.5, 1);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int k = 0; k < 50; ++k) {
    const double y = dist(rng);
    CHECK(spec.f(-y) == doctest::Approx(-spec.f(y)).epsilon(1e-14));
    CHECK(spec.F(-y) == doctest::Approx(spec.F(y)).epsilon(1e-14));
    // F' = f and (f)' = fprime, via symmetric differences.
    const double h = 1e-6;
    CHECK((spec.F(y + h) - spec.F(y - h)) / (2.0 * h) ==
          doctest::Approx(spec.f(y)).epsilon(1e-7));
    CHECK((spec.f(y + h) - spec.f(y - h)) / (2.0 * h) ==
          doctest::Approx(spec.fprime(y)).epsilon(1e-6));
  }
  CHECK(spec.beta_holder() == doctest::Approx(1.0));
  CHECK(NonlinearitySpec::pure_power(1.5, 1).beta_holder() ==
        doctest::Approx(0.5));
}

TEST_CASE("two-term difference of powers") {
  auto spec = NonlinearitySpec::make({{1.0, 5.0}}, {{0.5, 2.0}}, 0.5, 1);
  const double y = 1.3;
  CHECK(spec.f(y) == doctest::Approx(std::pow(y, 5.0) - 0.5 * y * y));
  CHECK(spec.F(y) ==
        doctest::Approx(std::pow(y, 6.0) / 6.0 - 0.5 * std::pow(y, 3.0) / 3.0));
  CHECK(spec.beta_holder() == doctest::Approx(1.0));
}

TEST_CASE("validation rules") {
  // Repulsive exponent must stay below every attractive exponent.
  CHECK_THROWS_AS(NonlinearitySpec::make({{1.0, 2.0}}, {{1.0, 3.0}}, 0.5, 1),
                  std::invalid_argument);
  // Coefficients must be nonnegative, exponents above one.
  CHECK_THROWS_AS(NonlinearitySpec::make({{-1.0, 3.0}}, {}, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::make({{1.0, 0.5}}, {}, 1.0, 1),
                  std::invalid_argument);
  // Subcritical only for d >= 3: p < (d+2)/(d-2).
  CHECK_THROWS_AS(NonlinearitySpec::pure_power(5.0, 3), std::invalid_argument);
  CHECK_NOTHROW(NonlinearitySpec::pure_power(3.0, 3));
  CHECK_NOTHROW(NonlinearitySpec::pure_power(5.0, 1));
  // gamma must be positive.
  CHECK_THROWS_AS(NonlinearitySpec::make({{1.0, 3.0}}, {}, 0.0, 1),
                  std::invalid_argument);
  // At least one attractive term.
  CHECK_THROWS_AS(NonlinearitySpec::make({}, {{1.0, 2.0}}, 0.5, 1),
                  std::invalid_argument);
}

TEST_CASE("linear spec") {
  auto spec = NonlinearitySpec::linear();
  CHECK(spec.is_zero());
  CHECK(spec.f(3.0) == 0.0);
  CHECK(spec.F(3.0) == 0.0);
}

TEST_CASE("superquadraticity slack vanishes for a pure power") {
  auto g = build_grid(1, 15.0, 256);
  auto spec = NonlinearitySpec::pure_power(3.0, 1);
  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  Eigen::VectorXd u(g->N);
  for (int i = 0; i < g->N; ++i) u[i] = dist(rng);
  CHECK(std::abs(ar_slack(spec, u, *g)) < 1e-11);
}

TEST_CASE("superquadraticity slack is nonpositive with a repulsive term") {
  // f = y^3 - 0.5 y^{1.5 sign}, gamma from the attractive power: the mixed
  // sign makes 2(1+gamma) F - u f strictly negative away from zero.
  auto g = build_grid(1, 15.0, 256);
  auto spec = NonlinearitySpec::make({{1.0, 3.0}}, {{0.5, 2.0}}, 1.0, 1);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(g->N, 1.5);
  CHECK(ar_slack(spec, u, *g) < 0.0);
}
