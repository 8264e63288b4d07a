#ifndef LOCCONVEX_DECOMPOSE_HPP
#define LOCCONVEX_DECOMPOSE_HPP

#include "locconvex/curves.hpp"
#include "locconvex/integrate.hpp"
#include "locconvex/quaternion.hpp"

namespace locconvex {

/// The three scalar functions driving the left/right spin velocities:
/// b_l = speed (tau+1)/2, b_r = speed (tau-1)/2, d = speed kappa / 2.
struct PairData {
  ScalarPath b_l;
  ScalarPath b_r;
  ScalarPath d;
};

/// Left and right spherical parts of a curve together with the lifted
/// endpoint spins produced by the shared integrator.
struct CurvePair {
  AnalyticCurve left;
  AnalyticCurve right;
  UnitQuat z_left;
  UnitQuat z_right;
  bool locally_convex = false;
};

PairData pair_data(const AnalyticCurve& curve, int grid = 1024);

CurvePair split(const AnalyticCurve& curve, int grid = 1024, int steps = 4096);

/// Inverse of split: speeds must agree pointwise and kappa_left must exceed
/// kappa_right (strictly, in magnitude when the pair is tagged locally
/// convex).
AnalyticCurve fuse(const CurvePair& pair, int grid = 1024, int steps = 4096);

}  // namespace locconvex

#endif
