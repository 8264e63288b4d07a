#ifndef LOCCONVEX_CONVEXITY_HPP
#define LOCCONVEX_CONVEXITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "locconvex/curves.hpp"
#include "locconvex/linalg.hpp"

namespace locconvex {

struct Hyperplane {
  VecX normal;  // unit
};

/// Normalizes; the zero vector is rejected.
Hyperplane hyperplane(VecX normal);

struct IntersectionRoot {
  double t = 0.0;
  int multiplicity = 1;
};

struct IntersectionReport {
  std::vector<IntersectionRoot> roots;
  int total = 0;
  bool interior_only = true;
};

/// Zeros of normal . gamma on (0,1) with multiplicity, endpoints excluded.
/// A derivative counts as vanishing below tol * max_t |gamma^(j)|; values
/// within a factor 3 of that threshold raise TangencyUnresolved rather than
/// being guessed either way.
IntersectionReport hyperplane_intersections(const AnalyticCurve& curve, const Hyperplane& plane,
                                            double tol = 1e-7, int grid = 8192);

struct NonconvexityCertificate {
  Hyperplane plane;
  IntersectionReport report;
};

/// Search for a hyperplane met at least dim times: candidates pass through
/// dim - 1 sampled curve points, plus coordinate axes and seeded random
/// normals. Absence of a certificate is not a convexity proof.
std::optional<NonconvexityCertificate> nonconvexity_certificate(const AnalyticCurve& curve,
                                                                std::uint64_t seed = 0);

/// Affine chart (1, x2/x1, x3/x1, x4/x1) of a curve whose first coordinate
/// stays positive; derivatives by the quotient rule. The domain condition is
/// checked at evaluation time.
AnalyticCurve central_projection(const AnalyticCurve& curve);

/// Division times 0 = t_0 < ... < t_k = 1 with identity frames at the
/// interior t_i and every arc certified convex, if such times exist.
std::optional<std::vector<double>> is_multiconvex(const AnalyticCurve& curve, int k);

struct HemisphereResult {
  VecX pole;
  double margin = 0.0;
  bool borderline = false;
};

/// Pole with pole . gamma > 0 on all samples (open hemisphere), or >= 0 with
/// equality attained (borderline), found by cyclic projection onto the
/// half-space constraints.
std::optional<HemisphereResult> hemisphere_check(const AnalyticCurve& curve, int samples = 512);

/// Winding number of the derivative of the stereographic projection from
/// -pole over one period of a closed hemispherical curve.
int rotation_number(const AnalyticCurve& curve, const Vec3& pole, int samples = 1024);

}  // namespace locconvex

#endif
