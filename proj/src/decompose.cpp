#include "locconvex/decompose.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace locconvex {

namespace {

std::vector<double> uniform_grid(int grid) {
  std::vector<double> t(grid + 1);
  for (int i = 0; i <= grid; ++i) t[i] = static_cast<double>(i) / grid;
  return t;
}

std::string part_label(const std::string& base, const char* part) {
  return base.empty() ? std::string(part) : base + "." + part;
}

}  // namespace

PairData pair_data(const AnalyticCurve& curve, int grid) {
  if (curve.dim != 4) throw InvalidInput("pair data needs a curve in the 3-sphere");
  if (grid < 2) throw InvalidInput("grid must have at least two cells");

  const std::vector<double> t = uniform_grid(grid);
  std::vector<double> bl(t.size()), br(t.size()), d(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrenetSample f = frenet(curve, t[i]);
    bl[i] = 0.5 * f.speed * (f.tau + 1.0);
    br[i] = 0.5 * f.speed * (f.tau - 1.0);
    d[i] = 0.5 * f.speed * f.kappa;
  }

  PairData data;
  data.b_l = piecewise_linear(t, bl);
  data.b_r = piecewise_linear(t, br);
  data.d = piecewise_linear(t, d);
  return data;
}

CurvePair split(const AnalyticCurve& curve, int grid, int steps) {
  const PairData data = pair_data(curve, grid);

  const ScalarPath speed = [d = data.d](double t) { return 2.0 * d(t); };
  CoefficientPath left_coeffs;
  left_coeffs.dim = 3;
  left_coeffs.c = {speed, [b = data.b_l](double t) { return 2.0 * b(t); }, ScalarPath{}};
  left_coeffs.quasi = true;
  CoefficientPath right_coeffs;
  right_coeffs.dim = 3;
  right_coeffs.c = {speed, [b = data.b_r](double t) { return 2.0 * b(t); }, ScalarPath{}};
  right_coeffs.quasi = true;

  const HolonomicPath left_path = integrate_holonomic_single(data.b_l, data.d, steps);
  const HolonomicPath right_path = integrate_holonomic_single(data.b_r, data.d, steps);

  CurvePair pair;
  pair.left = curve_from_holonomic(left_path, left_coeffs, part_label(curve.label, "left"));
  pair.right = curve_from_holonomic(right_path, right_coeffs, part_label(curve.label, "right"));
  pair.z_left = left_path.z.back();
  pair.z_right = right_path.z.back();
  pair.locally_convex = is_locally_convex(curve).ok;
  return pair;
}

AnalyticCurve fuse(const CurvePair& pair, int grid, int steps) {
  if (pair.left.dim != 3 || pair.right.dim != 3)
    throw InvalidInput("fuse needs a pair of curves in the 2-sphere");
  if (grid < 2) throw InvalidInput("grid must have at least two cells");

  const std::vector<double> t = uniform_grid(grid);
  std::vector<double> bl(t.size()), br(t.size()), d(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const FrenetSample fl = frenet(pair.left, t[i]);
    const FrenetSample fr = frenet(pair.right, t[i]);
    const double speed_tol = 1e-8 * std::max(1.0, std::abs(fl.speed));
    if (std::abs(fl.speed - fr.speed) > speed_tol)
      throw PairConditionViolated("speed", t[i],
                                  "left and right speeds disagree at t = " + std::to_string(t[i]));
    if (!(fl.kappa - fr.kappa > 1e-12))
      throw PairConditionViolated(
          "kappa gap", t[i],
          "kappa_left does not exceed kappa_right at t = " + std::to_string(t[i]));
    if (pair.locally_convex && !(fl.kappa > std::abs(fr.kappa)))
      throw PairConditionViolated(
          "kappa magnitude", t[i],
          "kappa_left does not dominate |kappa_right| at t = " + std::to_string(t[i]));
    bl[i] = 0.5 * fl.speed * fl.kappa;
    br[i] = 0.5 * fr.speed * fr.kappa;
    d[i] = 0.5 * fl.speed;
  }

  const ScalarPath bl_path = piecewise_linear(t, bl);
  const ScalarPath br_path = piecewise_linear(t, br);
  const ScalarPath d_path = piecewise_linear(t, d);

  CoefficientPath coeffs;
  coeffs.dim = 4;
  coeffs.c = {[b = bl_path, c = br_path](double s) { return b(s) - c(s); },
              [f = d_path](double s) { return 2.0 * f(s); },
              [b = bl_path, c = br_path](double s) { return b(s) + c(s); }};
  coeffs.quasi = !pair.locally_convex;

  const HolonomicGrid path = integrate_holonomic_pair(bl_path, br_path, d_path, steps);
  return curve_from_holonomic(path, coeffs, "fuse");
}

}  // namespace locconvex
