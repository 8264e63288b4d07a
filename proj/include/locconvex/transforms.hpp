#ifndef LOCCONVEX_TRANSFORMS_HPP
#define LOCCONVEX_TRANSFORMS_HPP

#include "locconvex/curves.hpp"
#include "locconvex/decompose.hpp"
#include "locconvex/linalg.hpp"

namespace locconvex {

/// Closed insert with trivial lifted endpoint.
struct LoopTemplate {
  AnalyticCurve loop;
};

LoopTemplate default_loop_template(int dim);

struct RRParams {
  double eps = 0.1;
  double delta = 0.05;
};

AnalyticCurve time_reversal(const AnalyticCurve& curve);

AnalyticCurve arnold_dual(const AnalyticCurve& curve);

/// gamma((1-eps) t), resp. gamma((1-eps) t + eps).
AnalyticCurve chop_eps_minus(const AnalyticCurve& curve, double eps);
AnalyticCurve chop_eps_plus(const AnalyticCurve& curve, double eps);

/// Splice the template loop into the curve at t0, frame-aligned, squeezing
/// the neighbouring pieces into windows of width eps; eps <= 0 picks the
/// default window.
AnalyticCurve add_loops(const AnalyticCurve& curve, double t0, const LoopTemplate& tmpl,
                        double eps = 0.0);

/// Lower curvature by delta near the base point (by delta^2 eps^2 elsewhere),
/// then reflect: negative locally convex output with the speed of the input.
AnalyticCurve relax_reflect(const AnalyticCurve& curve, const RRParams& params);

/// (curve, relax_reflect(curve)) with lifted endpoint spins, ready for fuse.
CurvePair hat_pair(const AnalyticCurve& curve, const RRParams& params);

/// Frame of the model pair (1, exp(-eps h_r)) with h_r = -cos(theta) i +
/// sin(theta) k and theta = pi/4 + delta.
Mat4 rr_model_matrix(double eps, double delta);

}  // namespace locconvex

#endif
