#ifndef LOCCONVEX_CURVES_HPP
#define LOCCONVEX_CURVES_HPP

#include <functional>
#include <string>
#include <vector>

#include "locconvex/linalg.hpp"
#include "locconvex/quaternion.hpp"

namespace locconvex {

inline constexpr double kPi = 3.14159265358979323846;

/// Position and first three derivatives at one time, one column each.
struct Jet {
  MatX cols;

  int dim() const { return static_cast<int>(cols.rows()); }
  VecX gamma() const { return cols.col(0); }
  VecX d1() const { return cols.col(1); }
  VecX d2() const { return cols.col(2); }
  VecX d3() const { return cols.col(3); }
};

/// Time-parameterized evaluator of a curve and its derivatives on [0,1].
struct AnalyticCurve {
  int dim = 3;
  std::string label;
  std::function<Jet(double)> eval;

  Jet jet(double t) const { return eval(t); }
  VecX point(double t) const { return eval(t).cols.col(0); }
};

struct FrenetSample {
  double t = 0.0;
  MatX frame;
  double speed = 0.0;
  double kappa = 0.0;
  double tau = 0.0;  // ambient dimension 4 only
};

/// Subdiagonal entries of the tridiagonal skew-symmetric logarithmic
/// derivative: (speed, speed*kappa) or (speed, speed*kappa, speed*tau).
struct LogDerivative {
  int dim = 3;
  double c[3] = {0.0, 0.0, 0.0};

  MatX matrix() const;
};

FrenetSample frenet(const AnalyticCurve& curve, double t);
LogDerivative log_derivative(const AnalyticCurve& curve, double t);

struct ScanResult {
  bool ok = false;
  double margin = 0.0;
  double witness = 0.0;
};

/// Sign scan of det(gamma, ..., gamma^(n)) over a uniform grid.
ScanResult is_locally_convex(const AnalyticCurve& curve, int grid = 1024);
/// Rank scan of the first n derivative columns over a uniform grid.
ScanResult is_generic(const AnalyticCurve& curve, int grid = 1024);

/// The circle of length c on the sphere with frame(0) = I.
AnalyticCurve circle_sigma(double c);

/// curve(k t), wrapping through the period for closed curves.
AnalyticCurve iterate(const AnalyticCurve& curve, double k);

AnalyticCurve gamma1(int m);
AnalyticCurve gamma2(int m);
AnalyticCurve gamma3(int m);
AnalyticCurve gamma4(int m);

std::vector<FrenetSample> frenet_path(const AnalyticCurve& curve, int steps = 1024);
std::vector<UnitQuat> lifted_frenet_path3(const AnalyticCurve& curve, int steps = 1024);
std::vector<SpinPair> lifted_frenet_path4(const AnalyticCurve& curve, int steps = 1024);

}  // namespace locconvex

#endif
