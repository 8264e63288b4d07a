#include "locconvex/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "locconvex/covering.hpp"

namespace locconvex {

namespace {

constexpr double kPositivityMargin = 1e-12;

void validate_coefficients(const CoefficientPath& coeffs, double t) {
  const int n = coeffs.dim - 1;
  for (int i = 0; i < n; ++i) {
    if (i == n - 1 && coeffs.quasi) continue;
    if (!(coeffs.c[i](t) > kPositivityMargin))
      throw NonPositiveCoefficient(i + 1, t,
                                   "coefficient " + std::to_string(i + 1) +
                                       " not positive at t = " + std::to_string(t));
  }
}

}  // namespace

ScalarPath constant_path(double value) {
  return [value](double) { return value; };
}

ScalarPath piecewise_linear(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw InvalidInput("grid and values must share a length of at least 2");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1])) throw InvalidInput("grid must increase strictly");

  return [grid = std::move(grid), values = std::move(values)](double t) {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double w = (t - grid[k]) / (grid[k + 1] - grid[k]);
    return (1.0 - w) * values[k] + w * values[k + 1];
  };
}

MatX CoefficientPath::matrix(double t) const {
  MatX m = MatX::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    const double v = c[i](t);
    m(i + 1, i) = v;
    m(i, i + 1) = -v;
  }
  return m;
}

std::vector<MatX> integrate_jacobian(const CoefficientPath& coeffs, int steps) {
  if (coeffs.dim != 3 && coeffs.dim != 4) throw InvalidInput("ambient dimension must be 3 or 4");
  if (steps < 1) throw InvalidInput("steps must be positive");

  const double h = 1.0 / steps;
  std::vector<MatX> grid;
  grid.reserve(steps + 1);
  grid.push_back(MatX::Identity(coeffs.dim, coeffs.dim));
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * h;
    validate_coefficients(coeffs, tm);
    const MatX step = coeffs.dim == 3 ? MatX(exp_so3(h * coeffs.matrix(tm)))
                                      : MatX(exp_so4(h * coeffs.matrix(tm)));
    grid.push_back(grid.back() * step);
  }
  return grid;
}

HolonomicPath integrate_holonomic_single(const ScalarPath& b, const ScalarPath& d, int steps) {
  if (steps < 1) throw InvalidInput("steps must be positive");
  const double h = 1.0 / steps;

  HolonomicPath path;
  path.t.reserve(steps + 1);
  path.z.reserve(steps + 1);
  path.lambda.reserve(steps);
  path.t.push_back(0.0);
  path.z.push_back(UnitQuat{});
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * h;
    const double dv = d(tm);
    if (!(dv > kPositivityMargin))
      throw ConditionViolated("d", tm, "d not positive at t = " + std::to_string(tm));
    const ImagQuat lam{b(tm), 0.0, dv};
    path.lambda.push_back(lam);
    path.z.push_back(path.z.back() * quat_exp(h * lam));
    path.t.push_back((k + 1.0) * h);
  }
  return path;
}

HolonomicGrid integrate_holonomic_pair(const ScalarPath& b_l, const ScalarPath& b_r,
                                       const ScalarPath& d, int steps) {
  if (steps < 1) throw InvalidInput("steps must be positive");
  const double h = 1.0 / steps;

  HolonomicGrid grid;
  grid.t.reserve(steps + 1);
  grid.z.reserve(steps + 1);
  grid.lambda_left.reserve(steps);
  grid.lambda_right.reserve(steps);
  grid.t.push_back(0.0);
  grid.z.push_back(SpinPair{});
  for (int k = 0; k < steps; ++k) {
    const double tm = (k + 0.5) * h;
    const double dv = d(tm);
    const double bl = b_l(tm);
    const double br = b_r(tm);
    if (!(dv > kPositivityMargin))
      throw ConditionViolated("d", tm, "d not positive at t = " + std::to_string(tm));
    if (!(bl - br > kPositivityMargin))
      throw ConditionViolated("b_l - b_r", tm,
                              "b_l does not exceed b_r at t = " + std::to_string(tm));
    const ImagQuat laml{bl, 0.0, dv};
    const ImagQuat lamr{br, 0.0, dv};
    grid.lambda_left.push_back(laml);
    grid.lambda_right.push_back(lamr);
    grid.z.push_back(grid.z.back() * SpinPair{quat_exp(h * laml), quat_exp(h * lamr)});
    grid.t.push_back((k + 1.0) * h);
  }
  return grid;
}

namespace {

std::size_t step_index(double t, std::size_t steps) {
  const double scaled = t * static_cast<double>(steps);
  const double floored = std::floor(scaled);
  if (floored <= 0.0) return 0;
  const std::size_t k = static_cast<std::size_t>(floored);
  return std::min(k, steps - 1);
}

MatX matrix_prime(const CoefficientPath& coeffs, double t) {
  const double eps = 1e-5;
  const double lo = std::max(0.0, t - eps);
  const double hi = std::min(1.0, t + eps);
  return (coeffs.matrix(hi) - coeffs.matrix(lo)) / (hi - lo);
}

MatX matrix_second(const CoefficientPath& coeffs, double t) {
  const double eps = 1e-4;
  const double c = std::clamp(t, eps, 1.0 - eps);
  return (coeffs.matrix(c + eps) - 2.0 * coeffs.matrix(c) + coeffs.matrix(c - eps)) / (eps * eps);
}

Jet jet_from_frame(const MatX& frame, const CoefficientPath& coeffs, double t) {
  const MatX lam = coeffs.matrix(t);
  const MatX lamp = matrix_prime(coeffs, t);
  const MatX lampp = matrix_second(coeffs, t);
  const VecX a1 = lam.col(0);
  const VecX u2 = lam * a1 + lamp.col(0);
  const VecX u3 = lam * (lam * a1) + 2.0 * (lam * lamp.col(0)) + lamp * a1 + lampp.col(0);

  Jet jet;
  jet.cols.resize(frame.rows(), 4);
  jet.cols.col(0) = frame.col(0);
  jet.cols.col(1) = frame * a1;
  jet.cols.col(2) = frame * u2;
  jet.cols.col(3) = frame * u3;
  return jet;
}

}  // namespace

AnalyticCurve curve_from_jacobian(const std::vector<MatX>& grid) {
  if (grid.size() < 2) throw InvalidInput("grid needs at least two frames");
  const int dim = static_cast<int>(grid.front().rows());
  if (dim != 3 && dim != 4) throw InvalidInput("ambient dimension must be 3 or 4");

  const std::size_t steps = grid.size() - 1;
  const double h = 1.0 / static_cast<double>(steps);

  auto lambdas = std::make_shared<std::vector<MatX>>();
  lambdas->reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const MatX rel = grid[k].transpose() * grid[k + 1];
    if (dim == 3) {
      UnitQuat z = pi3_inverse(rel);
      if (z.a() < 0.0) z = -z;
      lambdas->push_back(dpi3((1.0 / h) * quat_log(z)));
    } else {
      SpinPair z = pi4_inverse(rel);
      if (z.left.a() < 0.0) z = -z;
      lambdas->push_back(dpi4((1.0 / h) * quat_log(z.left), (1.0 / h) * quat_log(z.right)));
    }
  }

  auto frames = std::make_shared<std::vector<MatX>>(grid);

  AnalyticCurve curve;
  curve.dim = dim;
  curve.label = "jacobian";
  curve.eval = [frames, lambdas, steps, h, dim](double t) {
    const std::size_t k = step_index(t, steps);
    const double s = t - static_cast<double>(k) * h;
    const MatX& lam = (*lambdas)[k];
    const MatX frame =
        (*frames)[k] * (dim == 3 ? MatX(exp_so3(s * lam)) : MatX(exp_so4(s * lam)));
    const VecX a1 = lam.col(0);

    Jet jet;
    jet.cols.resize(dim, 4);
    jet.cols.col(0) = frame.col(0);
    jet.cols.col(1) = frame * a1;
    jet.cols.col(2) = frame * (lam * a1);
    jet.cols.col(3) = frame * (lam * (lam * a1));
    return jet;
  };
  return curve;
}

AnalyticCurve curve_from_holonomic(const HolonomicPath& path, const CoefficientPath& coeffs,
                                   std::string label) {
  if (path.z.size() < 2 || path.lambda.size() + 1 != path.z.size())
    throw InvalidInput("holonomic path is incomplete");
  const std::size_t steps = path.lambda.size();
  const double h = 1.0 / static_cast<double>(steps);

  auto data = std::make_shared<HolonomicPath>(path);

  AnalyticCurve curve;
  curve.dim = 3;
  curve.label = std::move(label);
  curve.eval = [data, coeffs, steps, h](double t) {
    const std::size_t k = step_index(t, steps);
    const double s = t - static_cast<double>(k) * h;
    const UnitQuat z = data->z[k] * quat_exp(s * data->lambda[k]);
    return jet_from_frame(pi3(z), coeffs, t);
  };
  return curve;
}

AnalyticCurve curve_from_holonomic(const HolonomicGrid& grid, const CoefficientPath& coeffs,
                                   std::string label) {
  if (grid.z.size() < 2 || grid.lambda_left.size() + 1 != grid.z.size())
    throw InvalidInput("holonomic grid is incomplete");
  const std::size_t steps = grid.lambda_left.size();
  const double h = 1.0 / static_cast<double>(steps);

  auto data = std::make_shared<HolonomicGrid>(grid);

  AnalyticCurve curve;
  curve.dim = 4;
  curve.label = std::move(label);
  curve.eval = [data, coeffs, steps, h](double t) {
    const std::size_t k = step_index(t, steps);
    const double s = t - static_cast<double>(k) * h;
    const SpinPair z = data->z[k] * SpinPair{quat_exp(s * data->lambda_left[k]),
                                             quat_exp(s * data->lambda_right[k])};
    return jet_from_frame(pi4(z), coeffs, t);
  };
  return curve;
}

AnalyticCurve solve_unique_curve(const CoefficientPath& coeffs, int steps) {
  if (coeffs.dim != 3 && coeffs.dim != 4) throw InvalidInput("ambient dimension must be 3 or 4");
  for (int k = 0; k < steps; ++k) validate_coefficients(coeffs, (k + 0.5) / steps);

  if (coeffs.dim == 3) {
    const ScalarPath b = [f = coeffs.c[1]](double t) { return 0.5 * f(t); };
    const ScalarPath d = [f = coeffs.c[0]](double t) { return 0.5 * f(t); };
    return curve_from_holonomic(integrate_holonomic_single(b, d, steps), coeffs, "solve");
  }

  const ScalarPath b_l = [f = coeffs.c[0], g = coeffs.c[2]](double t) {
    return 0.5 * (f(t) + g(t));
  };
  const ScalarPath b_r = [f = coeffs.c[0], g = coeffs.c[2]](double t) {
    return 0.5 * (g(t) - f(t));
  };
  const ScalarPath d = [f = coeffs.c[1]](double t) { return 0.5 * f(t); };
  return curve_from_holonomic(integrate_holonomic_pair(b_l, b_r, d, steps), coeffs, "solve");
}

}  // namespace locconvex
