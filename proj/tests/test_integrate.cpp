#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "locconvex/covering.hpp"
#include "locconvex/curves.hpp"
#include "locconvex/integrate.hpp"
#include "oracles.hpp"

using namespace locconvex;

namespace {

CoefficientPath circle_coeffs(double c) {
  const double rho = std::asin(c / (2.0 * kPi));
  CoefficientPath coeffs;
  coeffs.dim = 3;
  coeffs.c[0] = constant_path(c);
  coeffs.c[1] = constant_path(c / std::tan(rho));
  return coeffs;
}

CoefficientPath gamma1_coeffs() {
  CoefficientPath coeffs;
  coeffs.dim = 4;
  coeffs.c[0] = constant_path(kPi * std::sqrt(3.0) / 2.0);
  coeffs.c[1] = constant_path(kPi);
  coeffs.c[2] = constant_path(kPi * std::sqrt(3.0) / 2.0);
  return coeffs;
}

CoefficientPath wavy_coeffs(int dim) {
  CoefficientPath coeffs;
  coeffs.dim = dim;
  coeffs.c[0] = [](double t) { return 2.0 + std::sin(2.0 * kPi * t); };
  coeffs.c[1] = [](double t) { return 1.5 + std::cos(2.0 * kPi * t) / 2.0; };
  coeffs.c[2] = [](double t) { return 1.0 + t * (1.0 - t); };
  return coeffs;
}

double grid_error(const std::vector<MatX>& coarse, const std::vector<MatX>& fine) {
  const std::size_t stride = (fine.size() - 1) / (coarse.size() - 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k)
    worst = std::max(worst,
                     (coarse[k] - fine[k * stride]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("piecewise_linear interpolates inside and clamps outside") {
  const ScalarPath p = piecewise_linear({0.2, 0.5, 0.9}, {1.0, 3.0, 2.0});
  CHECK(p(0.2) == 1.0);
  CHECK(p(0.5) == 3.0);
  CHECK(p(0.35) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p(0.7) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(p(0.0) == 1.0);
  CHECK(p(-5.0) == 1.0);
  CHECK(p(1.0) == 2.0);
  CHECK(p(5.0) == 2.0);
}

TEST_CASE("piecewise_linear validates its grid") {
  CHECK_THROWS_AS(piecewise_linear({0.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(piecewise_linear({0.0, 1.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(piecewise_linear({0.0, 0.0}, {1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(piecewise_linear({0.5, 0.2}, {1.0, 2.0}), InvalidInput);
}

TEST_CASE("constant coefficients integrate to a one parameter subgroup") {
  for (int dim : {3, 4}) {
    CoefficientPath coeffs;
    coeffs.dim = dim;
    coeffs.c[0] = constant_path(1.3);
    coeffs.c[1] = constant_path(0.7);
    coeffs.c[2] = constant_path(2.1);
    const MatX lambda = coeffs.matrix(0.0);
    const int steps = 256;
    const auto grid = integrate_jacobian(coeffs, steps);
    REQUIRE(static_cast<int>(grid.size()) == steps + 1);
    for (int k = 0; k <= steps; k += 16) {
      const double t = static_cast<double>(k) / steps;
      const MatX direct = dim == 3 ? MatX(exp_so3(t * lambda)) : MatX(exp_so4(t * lambda));
      CHECK((grid[k] - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("midpoint stepping converges at second order") {
  for (int dim : {3, 4}) {
    const CoefficientPath coeffs = wavy_coeffs(dim);
    const auto reference = integrate_jacobian(coeffs, 8192);
    const double e64 = grid_error(integrate_jacobian(coeffs, 64), reference);
    const double e128 = grid_error(integrate_jacobian(coeffs, 128), reference);
    CHECK(e64 / e128 > 3.0);
    CHECK(e64 / e128 < 5.0);
  }
}

TEST_CASE("nonpositive coefficients are reported with index and time") {
  CoefficientPath coeffs = wavy_coeffs(3);
  coeffs.c[1] = [](double t) { return 0.5 - t; };
  try {
    integrate_jacobian(coeffs, 64);
    CHECK(false);
  } catch (const NonPositiveCoefficient& e) {
    CHECK(e.index == 2);
    CHECK(e.t > 0.45);
    CHECK(e.t < 0.60);
  }

  CoefficientPath quasi = coeffs;
  quasi.quasi = true;
  CHECK_NOTHROW(integrate_jacobian(quasi, 64));

  CoefficientPath middle = wavy_coeffs(4);
  middle.c[1] = constant_path(-1.0);
  middle.quasi = true;
  CHECK_THROWS_AS(integrate_jacobian(middle, 64), NonPositiveCoefficient);
}

TEST_CASE("holonomic stepping matches the matrix integrator through the covers") {
  const int steps = 512;

  const CoefficientPath c3 = wavy_coeffs(3);
  const auto grid3 = integrate_jacobian(c3, steps);
  const ScalarPath b3 = [&c3](double t) { return c3.c[1](t) / 2.0; };
  const ScalarPath d3 = [&c3](double t) { return c3.c[0](t) / 2.0; };
  const HolonomicPath h3 = integrate_holonomic_single(b3, d3, steps);
  REQUIRE(h3.z.size() == grid3.size());
  for (std::size_t k = 0; k < h3.z.size(); k += 32)
    CHECK((pi3(h3.z[k]) - grid3[k]).cwiseAbs().maxCoeff() < 1e-8);

  const CoefficientPath c4 = wavy_coeffs(4);
  const auto grid4 = integrate_jacobian(c4, steps);
  const ScalarPath bl = [&c4](double t) { return (c4.c[0](t) + c4.c[2](t)) / 2.0; };
  const ScalarPath br = [&c4](double t) { return (c4.c[2](t) - c4.c[0](t)) / 2.0; };
  const ScalarPath d4 = [&c4](double t) { return c4.c[1](t) / 2.0; };
  const HolonomicGrid h4 = integrate_holonomic_pair(bl, br, d4, steps);
  REQUIRE(h4.z.size() == grid4.size());
  for (std::size_t k = 0; k < h4.z.size(); k += 32)
    CHECK((pi4(h4.z[k]) - grid4[k]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("holonomic stepping insists on a positive middle coefficient") {
  const ScalarPath b = constant_path(1.0);
  const ScalarPath bad_d = [](double t) { return 0.3 - t; };
  try {
    integrate_holonomic_single(b, bad_d, 64);
    CHECK(false);
  } catch (const ConditionViolated& e) {
    CHECK(e.which == "d");
    CHECK(e.t > 0.25);
    CHECK(e.t < 0.40);
  }
}

TEST_CASE("curve_from_jacobian reproduces the grid it came from") {
  const CoefficientPath coeffs = wavy_coeffs(4);
  const int steps = 1024;
  const auto grid = integrate_jacobian(coeffs, steps);
  const AnalyticCurve curve = curve_from_jacobian(grid);
  CHECK(curve.dim == 4);
  for (int k = 0; k <= steps; k += 64) {
    const double t = static_cast<double>(k) / steps;
    CHECK((curve.point(t) - grid[k].col(0)).norm() < 1e-12);
    CHECK((frenet(curve, t).frame - grid[k]).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("solve_unique_curve reproduces the driving coefficients") {
  auto rng = oracles::test_rng(50);
  std::uniform_real_distribution<double> ts(0.05, 0.95);
  for (int dim : {3, 4}) {
    const CoefficientPath coeffs = wavy_coeffs(dim);
    const AnalyticCurve curve = solve_unique_curve(coeffs);
    for (int rep = 0; rep < 20; ++rep) {
      const double t = ts(rng);
      const LogDerivative ld = log_derivative(curve, t);
      for (int i = 0; i + 1 < dim; ++i)
        CHECK(std::abs(ld.c[i] - coeffs.c[i](t)) < 1e-6);
    }
  }
}

TEST_CASE("solve_unique_curve recovers the circle from its coefficients") {
  for (double c : {1.0, kPi, 5.0}) {
    const AnalyticCurve solved = solve_unique_curve(circle_coeffs(c));
    const AnalyticCurve target = circle_sigma(c);
    CHECK(oracles::sup_point_distance(solved, target, 200) < 1e-8);
  }
}

TEST_CASE("solve_unique_curve recovers the first family from its coefficients") {
  const AnalyticCurve solved = solve_unique_curve(gamma1_coeffs());
  const AnalyticCurve target = gamma1(1);
  CHECK(oracles::sup_point_distance(solved, target, 200) < 1e-6);
}

TEST_CASE("random coefficient curves satisfy their own log derivative") {
  auto rng = oracles::test_rng(51);
  std::uniform_real_distribution<double> amp(1.2, 2.4);
  std::uniform_real_distribution<double> frac(0.1, 0.5);
  std::uniform_real_distribution<double> ts(0.05, 0.95);
  for (int rep = 0; rep < 5; ++rep) {
    CoefficientPath coeffs;
    coeffs.dim = 4;
    for (int i = 0; i < 3; ++i) {
      const double base = amp(rng);
      const double wiggle = frac(rng);
      const double phase = amp(rng);
      coeffs.c[i] = [base, wiggle, phase](double t) {
        return base + wiggle * std::sin(2.0 * kPi * t + phase);
      };
    }
    const AnalyticCurve curve = solve_unique_curve(coeffs, 2048);
    for (int probe = 0; probe < 10; ++probe) {
      const double t = ts(rng);
      const LogDerivative ld = log_derivative(curve, t);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(ld.c[i] - coeffs.c[i](t)) < 1e-6);
    }
  }
}
