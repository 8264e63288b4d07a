#include "locconvex/convexity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "locconvex/bruhat.hpp"

namespace locconvex {

namespace {

constexpr double kRootSeparation = 1e-9;
constexpr double kDipScreen = 1e-3;

double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ternary_min(const std::function<double(double)>& f, double lo, double hi) {
  for (int iter = 0; iter < 90 && hi - lo > 1e-12; ++iter) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) <= f(b))
      hi = b;
    else
      lo = a;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Hyperplane hyperplane(VecX normal) {
  const double n = normal.norm();
  if (!(n > 1e-12)) throw InvalidInput("hyperplane normal must be nonzero");
  return Hyperplane{normal / n};
}

IntersectionReport hyperplane_intersections(const AnalyticCurve& curve, const Hyperplane& plane,
                                            double tol, int grid) {
  const int dim = curve.dim;
  if (plane.normal.size() != dim) throw InvalidInput("normal dimension does not match the curve");
  if (grid < 16) throw InvalidInput("grid too coarse");
  const VecX a = plane.normal / plane.normal.norm();

  std::vector<double> ts(grid + 1), f0(grid + 1);
  std::array<double, 4> scale{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i <= grid; ++i) {
    ts[i] = static_cast<double>(i) / grid;
    const Jet jet = curve.jet(ts[i]);
    f0[i] = a.dot(jet.cols.col(0));
    for (int j = 0; j < 4; ++j) scale[j] = std::max(scale[j], jet.cols.col(j).norm());
  }
  for (double& s : scale)
    if (s == 0.0) s = 1.0;

  const double f0max = *std::max_element(
      f0.begin(), f0.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  if (std::abs(f0max) < tol * scale[0])
    throw TangencyUnresolved(0.5, "curve does not leave the hyperplane");

  const auto f = [&](double t) { return a.dot(curve.point(t)); };
  const auto fabs = [&](double t) { return std::abs(f(t)); };

  std::vector<double> candidates;
  for (int i = 0; i < grid; ++i)
    if (f0[i] * f0[i + 1] < 0.0) candidates.push_back(bisect_sign_change(f, ts[i], ts[i + 1]));
  for (int i = 1; i < grid; ++i) {
    const double ai = std::abs(f0[i]);
    if (ai <= std::abs(f0[i - 1]) && ai <= std::abs(f0[i + 1]) && ai < kDipScreen * scale[0]) {
      const double t = ternary_min(fabs, ts[i - 1], ts[i + 1]);
      const double v = std::abs(f(t));
      if (v < tol * scale[0] / 3.0)
        candidates.push_back(t);
      else if (v < 3.0 * tol * scale[0])
        throw TangencyUnresolved(t, "near-tangency at t = " + std::to_string(t));
    }
  }

  std::sort(candidates.begin(), candidates.end());
  std::vector<double> roots;
  for (double t : candidates) {
    if (t < kRootSeparation || t > 1.0 - kRootSeparation) continue;
    if (!roots.empty() && t - roots.back() < kRootSeparation) continue;
    roots.push_back(t);
  }

  IntersectionReport report;
  for (double t : roots) {
    const Jet jet = curve.jet(t);
    int mult = dim;
    for (int j = 1; j < dim; ++j) {
      const double ratio = std::abs(a.dot(jet.cols.col(j))) / (tol * scale[j]);
      if (ratio >= 3.0) {
        mult = j;
        break;
      }
      if (ratio >= 1.0 / 3.0)
        throw TangencyUnresolved(
            t, "derivative order " + std::to_string(j) + " ambiguous at t = " + std::to_string(t));
    }
    report.roots.push_back(IntersectionRoot{t, mult});
    report.total += mult;
  }
  return report;
}

std::optional<NonconvexityCertificate> nonconvexity_certificate(const AnalyticCurve& curve,
                                                                std::uint64_t seed) {
  const int dim = curve.dim;
  const int need = dim;

  const int screen = 2048;
  MatX samples(screen + 1, dim);
  for (int i = 0; i <= screen; ++i)
    samples.row(i) = curve.point(static_cast<double>(i) / screen).transpose();

  constexpr int kAnchors = 12;
  MatX anchors(kAnchors, dim);
  for (int j = 0; j < kAnchors; ++j)
    anchors.row(j) = curve.point((j + 0.5) / kAnchors).transpose();

  std::vector<VecX> pool;
  std::vector<int> combo(dim - 1);
  const std::function<void(int, int)> build = [&](int start, int depth) {
    if (depth == dim - 1) {
      MatX m(dim - 1, dim);
      for (int r = 0; r < dim - 1; ++r) m.row(r) = anchors.row(combo[r]);
      const Eigen::FullPivLU<MatX> lu(m);
      const MatX kernel = lu.kernel();
      if (kernel.cols() != 1) return;
      const double n = kernel.col(0).norm();
      if (n > 1e-9) pool.push_back(kernel.col(0) / n);
      return;
    }
    for (int j = start; j < kAnchors; ++j) {
      combo[depth] = j;
      build(j + 1, depth + 1);
    }
  };
  build(0, 0);
  for (int j = 0; j < dim; ++j) pool.push_back(VecX::Unit(dim, j));
  std::mt19937_64 rng(resolve_seed(seed));
  std::normal_distribution<double> gauss;
  for (int j = 0; j < 200; ++j) {
    VecX a(dim);
    for (int r = 0; r < dim; ++r) a[r] = gauss(rng);
    const double n = a.norm();
    if (n > 1e-9) pool.push_back(a / n);
  }

  for (const VecX& a : pool) {
    const VecX g = samples * a;
    const double gmax = g.cwiseAbs().maxCoeff();
    if (!(gmax > 0.0)) continue;
    int hits = 0;
    for (int i = 0; i < g.size() - 1; ++i)
      if (g[i] * g[i + 1] < 0.0) ++hits;
    for (int i = 1; i < g.size() - 1; ++i) {
      const double ai = std::abs(g[i]);
      if (ai <= std::abs(g[i - 1]) && ai <= std::abs(g[i + 1]) && ai < kDipScreen * gmax)
        hits += 2;
    }
    if (hits < need) continue;
    try {
      IntersectionReport report = hyperplane_intersections(curve, Hyperplane{a});
      if (report.total >= need)
        return NonconvexityCertificate{Hyperplane{a}, std::move(report)};
    } catch (const TangencyUnresolved&) {
    }
  }
  return std::nullopt;
}

AnalyticCurve central_projection(const AnalyticCurve& curve) {
  if (curve.dim != 4) throw InvalidInput("central projection needs a curve in the 3-sphere");

  AnalyticCurve out;
  out.dim = 4;
  out.label = curve.label.empty() ? "chart" : curve.label + ".chart";
  out.eval = [inner = curve.eval](double t) {
    const Jet jet = inner(t);
    const double w = jet.cols(0, 0);
    if (!(w > 1e-12))
      throw FirstCoordinateVanishes(t,
                                    "first coordinate not positive at t = " + std::to_string(t));
    const double w1 = jet.cols(0, 1);
    const double w2 = jet.cols(0, 2);
    const double w3 = jet.cols(0, 3);

    Jet chart;
    chart.cols.resize(4, 4);
    chart.cols.col(0) = jet.cols.col(0) / w;
    chart.cols.col(1) = (jet.cols.col(1) - chart.cols.col(0) * w1) / w;
    chart.cols.col(2) = (jet.cols.col(2) - 2.0 * chart.cols.col(1) * w1 -
                         chart.cols.col(0) * w2) / w;
    chart.cols.col(3) = (jet.cols.col(3) - 3.0 * chart.cols.col(2) * w1 -
                         3.0 * chart.cols.col(1) * w2 - chart.cols.col(0) * w3) / w;
    return chart;
  };
  return out;
}

namespace {

AnalyticCurve subarc(const AnalyticCurve& curve, double a, double b) {
  AnalyticCurve arc;
  arc.dim = curve.dim;
  arc.label = curve.label.empty() ? "arc" : curve.label + ".arc";
  arc.eval = [inner = curve.eval, a, len = b - a](double s) {
    Jet jet = inner(a + len * s);
    jet.cols.col(1) *= len;
    jet.cols.col(2) *= len * len;
    jet.cols.col(3) *= len * len * len;
    return jet;
  };
  return arc;
}

}  // namespace

std::optional<std::vector<double>> is_multiconvex(const AnalyticCurve& curve, int k) {
  if (curve.dim != 3) throw InvalidInput("multiconvexity is defined for curves in the 2-sphere");
  if (k < 1) throw InvalidInput("multiplicity must be positive");
  if (!is_locally_convex(curve).ok) throw InvalidInput("curve must be locally convex");

  const MatX base = frenet(curve, 0.0).frame;
  const auto frame_gap = [&](double t) {
    return (base.transpose() * frenet(curve, t).frame - Mat3::Identity()).norm();
  };

  const int scan = 2048;
  std::vector<double> gap(scan + 1);
  for (int i = 0; i <= scan; ++i) gap[i] = frame_gap(static_cast<double>(i) / scan);

  std::vector<double> returns;
  for (int i = 1; i < scan; ++i) {
    if (gap[i] <= gap[i - 1] && gap[i] <= gap[i + 1] && gap[i] < 0.25) {
      const double t =
          ternary_min(frame_gap, (i - 1.0) / scan, (i + 1.0) / scan);
      if (frame_gap(t) < 1e-6 && t > 1e-6 && t < 1.0 - 1e-6) {
        if (returns.empty() || t - returns.back() > kRootSeparation) returns.push_back(t);
      }
    }
  }

  if (static_cast<int>(returns.size()) != k - 1) return std::nullopt;

  std::vector<double> times;
  times.push_back(0.0);
  times.insert(times.end(), returns.begin(), returns.end());
  times.push_back(1.0);

  const SignedPermutation target = signed_perm_from_matrix(arnold_matrix(2));
  for (int arc_index = 0; arc_index < k; ++arc_index) {
    const AnalyticCurve arc = subarc(curve, times[arc_index], times[arc_index + 1]);
    bool in_cell = true;
    const double margin = 2e-3;
    for (int j = 0; j < 128 && in_cell; ++j) {
      const double s = margin + (1.0 - 2.0 * margin) * (j + 0.5) / 128.0;
      const MatX frame = base.transpose() * frenet(arc, s).frame;
      try {
        if (!(identify_cell(frame).cell == target)) in_cell = false;
      } catch (const DegeneratePivot&) {
        in_cell = false;
      }
    }
    if (in_cell) continue;
    if (nonconvexity_certificate(arc)) return std::nullopt;
    throw Inconclusive("arc " + std::to_string(arc_index + 1) + " of " + std::to_string(k) +
                       " could not be certified either way");
  }
  return times;
}

std::optional<HemisphereResult> hemisphere_check(const AnalyticCurve& curve, int samples) {
  if (curve.dim != 3) throw InvalidInput("hemisphere check needs a curve in the 2-sphere");
  if (samples < 8) throw InvalidInput("too few samples");
  if ((curve.point(0.0) - curve.point(1.0)).norm() > 1e-9)
    throw InvalidInput("curve must be closed");

  MatX points(samples, 3);
  for (int i = 0; i < samples; ++i)
    points.row(i) = curve.point(static_cast<double>(i) / samples).transpose();

  std::vector<Vec3> starts;
  const Vec3 mean = points.colwise().mean().transpose();
  if (mean.norm() > 1e-9) starts.push_back(mean.normalized());
  for (int j = 0; j < 3; ++j) {
    starts.push_back(Vec3::Unit(j));
    starts.push_back(-Vec3::Unit(j));
  }

  const auto project = [&](Vec3 h, double lower) -> std::optional<Vec3> {
    for (int sweep = 0; sweep < 5000; ++sweep) {
      bool moved = false;
      for (int i = 0; i < samples; ++i) {
        const double s = points.row(i).dot(h);
        if (s < lower - 1e-15) {
          h += (lower - s) * points.row(i).transpose();
          moved = true;
        }
      }
      if (!moved) return h;
    }
    return std::nullopt;
  };

  for (const Vec3& start : starts) {
    if (const auto h = project(start, 1e-3)) {
      const Vec3 pole = h->normalized();
      const double margin = (points * pole).minCoeff();
      if (margin > 0.0) return HemisphereResult{pole, margin, false};
    }
  }
  for (const Vec3& start : starts) {
    if (const auto h = project(start, 0.0)) {
      if (h->norm() < 1e-6) continue;
      const Vec3 pole = h->normalized();
      const double margin = (points * pole).minCoeff();
      if (margin >= -1e-9) return HemisphereResult{pole, margin, margin <= 1e-6};
    }
  }
  return std::nullopt;
}

int rotation_number(const AnalyticCurve& curve, const Vec3& pole, int samples) {
  if (curve.dim != 3) throw InvalidInput("rotation number needs a curve in the 2-sphere");
  if (samples < 8) throw InvalidInput("too few samples");
  const Vec3 h = pole.normalized();

  int weakest = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(h[j]) < std::abs(h[weakest])) weakest = j;
  const Vec3 axis = Vec3::Unit(weakest);
  const Vec3 u = (axis - axis.dot(h) * h).normalized();
  const Vec3 v = h.cross(u);

  for (int n = samples; n <= 16 * samples; n *= 4) {
    std::vector<double> dx(n + 1), dy(n + 1);
    double peak = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const Jet jet = curve.jet(t);
      const VecX g = jet.cols.col(0);
      const VecX g1 = jet.cols.col(1);
      const double w = 1.0 + g.dot(h);
      const double wp = g1.dot(h);
      dx[i] = g1.dot(u) / w - g.dot(u) * wp / (w * w);
      dy[i] = g1.dot(v) / w - g.dot(v) * wp / (w * w);
      peak = std::max(peak, std::hypot(dx[i], dy[i]));
    }
    for (int i = 0; i <= n; ++i)
      if (std::hypot(dx[i], dy[i]) < 1e-9 * peak)
        throw ImmersionLost(static_cast<double>(i) / n,
                            "projected derivative vanishes at t = " +
                                std::to_string(static_cast<double>(i) / n));

    double total = 0.0;
    for (int i = 0; i < n; ++i)
      total += std::atan2(dx[i] * dy[i + 1] - dy[i] * dx[i + 1],
                          dx[i] * dx[i + 1] + dy[i] * dy[i + 1]);
    const double turns = total / (2.0 * kPi);
    const long nearest = std::lround(turns);
    if (std::abs(turns - nearest) < 0.1) return static_cast<int>(nearest);
  }
  throw Inconclusive("winding residual did not settle");
}

}  // namespace locconvex
