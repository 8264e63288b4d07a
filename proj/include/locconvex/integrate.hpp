#ifndef LOCCONVEX_INTEGRATE_HPP
#define LOCCONVEX_INTEGRATE_HPP

#include <array>
#include <functional>
#include <vector>

#include "locconvex/curves.hpp"
#include "locconvex/linalg.hpp"
#include "locconvex/quaternion.hpp"

namespace locconvex {

using ScalarPath = std::function<double(double)>;

ScalarPath constant_path(double value);
ScalarPath piecewise_linear(std::vector<double> grid, std::vector<double> values);

/// Subdiagonal coefficient functions of a tridiagonal skew log-derivative on
/// the ambient dimension. quasi relaxes the sign constraint on the last one.
struct CoefficientPath {
  int dim = 3;
  std::array<ScalarPath, 3> c;
  bool quasi = false;

  MatX matrix(double t) const;
};

struct HolonomicPath {
  std::vector<double> t;
  std::vector<UnitQuat> z;
  std::vector<ImagQuat> lambda;  // midpoint samples, one per step
};

struct HolonomicGrid {
  std::vector<double> t;
  std::vector<SpinPair> z;
  std::vector<ImagQuat> lambda_left;
  std::vector<ImagQuat> lambda_right;
};

/// Midpoint-exponential stepping of Gamma' = Gamma Lambda(t) from the
/// identity; every factor is an exact group exponential.
std::vector<MatX> integrate_jacobian(const CoefficientPath& coeffs, int steps = 4096);

/// Spin-level stepping of z' = z (b i + d k) from 1.
HolonomicPath integrate_holonomic_single(const ScalarPath& b, const ScalarPath& d,
                                         int steps = 4096);

/// Componentwise spin-pair stepping from (1,1) with shared d.
HolonomicGrid integrate_holonomic_pair(const ScalarPath& b_l, const ScalarPath& b_r,
                                       const ScalarPath& d, int steps = 4096);

/// Sampled curve with first columns of the grid and derivatives rebuilt from
/// per-step logarithms, never from position differences.
AnalyticCurve curve_from_jacobian(const std::vector<MatX>& grid);

AnalyticCurve curve_from_holonomic(const HolonomicPath& path, const CoefficientPath& coeffs,
                                   std::string label = "holonomic");
AnalyticCurve curve_from_holonomic(const HolonomicGrid& grid, const CoefficientPath& coeffs,
                                   std::string label = "holonomic");

/// The locally convex curve determined by a coefficient path.
AnalyticCurve solve_unique_curve(const CoefficientPath& coeffs, int steps = 4096);

}  // namespace locconvex

#endif
