#include "locconvex/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "locconvex/bruhat.hpp"
#include "locconvex/covering.hpp"
#include "locconvex/integrate.hpp"

namespace locconvex {

namespace {

std::string tagged(const std::string& base, const char* tag) {
  return base.empty() ? std::string(tag) : base + "." + tag;
}

Jet rescaled(Jet jet, double factor) {
  double power = factor;
  for (int j = 1; j < 4; ++j, power *= factor) jet.cols.col(j) *= power;
  return jet;
}

Jet framed(const MatX& frame, Jet jet, double factor) {
  jet.cols = frame * jet.cols;
  return rescaled(std::move(jet), factor);
}

MatX fd_prime(const std::function<MatX(double)>& m, double t) {
  const double eps = 1e-5;
  const double lo = std::max(0.0, t - eps);
  const double hi = std::min(1.0, t + eps);
  return (m(hi) - m(lo)) / (hi - lo);
}

MatX fd_second(const std::function<MatX(double)>& m, double t) {
  const double eps = 1e-4;
  const double c = std::clamp(t, eps, 1.0 - eps);
  return (m(c + eps) - 2.0 * m(c) + m(c - eps)) / (eps * eps);
}

}  // namespace

LoopTemplate default_loop_template(int dim) {
  if (dim == 3) return LoopTemplate{iterate(circle_sigma(kPi), 2.0)};
  if (dim == 4) return LoopTemplate{gamma1(4)};
  throw InvalidInput("ambient dimension must be 3 or 4");
}

AnalyticCurve time_reversal(const AnalyticCurve& curve) {
  const MatX m = jplus(curve.dim - 1) * frenet(curve, 1.0).frame.transpose();

  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = tagged(curve.label, "tr");
  out.eval = [inner = curve.eval, m](double t) {
    Jet jet = inner(1.0 - t);
    jet.cols = m * jet.cols;
    return rescaled(std::move(jet), -1.0);
  };
  return out;
}

AnalyticCurve arnold_dual(const AnalyticCurve& curve) {
  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = tagged(curve.label, "ad");
  out.eval = [inner = curve](double t) {
    const MatX frame = ad_matrix(frenet(inner, t).frame);
    const std::function<MatX(double)> lam_at = [&inner](double s) {
      return ad_matrix(log_derivative(inner, s).matrix());
    };
    const MatX lam = lam_at(t);
    const MatX lamp = fd_prime(lam_at, t);
    const MatX lampp = fd_second(lam_at, t);
    const VecX a1 = lam.col(0);

    Jet jet;
    jet.cols.resize(inner.dim, 4);
    jet.cols.col(0) = frame.col(0);
    jet.cols.col(1) = frame * a1;
    jet.cols.col(2) = frame * (lam * a1 + lamp.col(0));
    jet.cols.col(3) =
        frame * (lam * (lam * a1) + 2.0 * (lam * lamp.col(0)) + lamp * a1 + lampp.col(0));
    return jet;
  };
  return out;
}

AnalyticCurve chop_eps_minus(const AnalyticCurve& curve, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0,1)");
  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = tagged(curve.label, "chop-");
  out.eval = [inner = curve.eval, eps](double t) {
    return rescaled(inner((1.0 - eps) * t), 1.0 - eps);
  };
  return out;
}

AnalyticCurve chop_eps_plus(const AnalyticCurve& curve, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0,1)");
  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = tagged(curve.label, "chop+");
  out.eval = [inner = curve.eval, eps](double t) {
    return rescaled(inner((1.0 - eps) * t + eps), 1.0 - eps);
  };
  return out;
}

AnalyticCurve add_loops(const AnalyticCurve& curve, double t0, const LoopTemplate& tmpl,
                        double eps) {
  if (t0 < 0.0 || t0 > 1.0) throw InvalidInput("insertion time must lie in [0,1]");
  if (tmpl.loop.dim != curve.dim) throw InvalidInput("template dimension mismatch");

  const bool at_start = t0 <= 0.0;
  const bool at_end = t0 >= 1.0;
  if (eps <= 0.0)
    eps = at_start || at_end ? 1e-2 : std::min(1e-2, 0.5 * std::min(t0, 1.0 - t0));
  if (at_start || at_end) {
    if (2.0 * eps >= 1.0) throw WindowOverflow("insertion window exceeds the domain");
  } else if (t0 - 2.0 * eps < 0.0 || t0 + 2.0 * eps > 1.0) {
    throw WindowOverflow("insertion window exceeds the domain");
  }

  const MatX frame = frenet(curve, t0).frame;

  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = tagged(curve.label, "loop");
  out.eval = [inner = curve.eval, loop = tmpl.loop.eval, frame, t0, eps, at_start,
              at_end](double t) {
    if (at_start) {
      if (t < eps) return framed(frame, loop(t / eps), 1.0 / eps);
      if (t < 2.0 * eps) return rescaled(inner(2.0 * t - 2.0 * eps), 2.0);
      return inner(t);
    }
    if (at_end) {
      if (t <= 1.0 - 2.0 * eps) return inner(t);
      if (t <= 1.0 - eps) return rescaled(inner(2.0 * t - 1.0 + 2.0 * eps), 2.0);
      return framed(frame, loop((t - 1.0 + eps) / eps), 1.0 / eps);
    }
    if (t <= t0 - 2.0 * eps) return inner(t);
    if (t <= t0 - eps) return rescaled(inner(2.0 * t - t0 + 2.0 * eps), 2.0);
    if (t < t0 + eps) return framed(frame, loop((t - t0 + eps) / (2.0 * eps)), 0.5 / eps);
    if (t <= t0 + 2.0 * eps) return rescaled(inner(2.0 * t - t0 - 2.0 * eps), 2.0);
    return inner(t);
  };
  return out;
}

AnalyticCurve relax_reflect(const AnalyticCurve& curve, const RRParams& params) {
  if (curve.dim != 3) throw InvalidInput("relax-reflect needs a curve in the 2-sphere");
  constexpr double kBlend = 1e-3;
  if (!(params.eps > 2.0 * kBlend && params.eps < 0.5 - kBlend))
    throw InvalidInput("eps must leave room for the blend inside (0, 1/2)");
  if (params.delta < 0.0) throw InvalidInput("delta must be nonnegative");
  if ((curve.point(0.0) - curve.point(1.0)).norm() > 1e-9)
    throw InvalidInput("curve must be closed");
  if (!is_locally_convex(curve).ok) throw InvalidInput("curve must be locally convex");

  const double inner_offset = params.delta * params.delta * params.eps * params.eps;
  const auto offset = [eps = params.eps, delta = params.delta, inner_offset](double t) {
    const auto ramp = [](double x) { return std::clamp(x, 0.0, 1.0); };
    if (t < 0.5) {
      const double s = ramp((t - (eps - kBlend)) / (2.0 * kBlend));
      return delta + (inner_offset - delta) * s;
    }
    const double s = ramp((t - (1.0 - eps - kBlend)) / (2.0 * kBlend));
    return inner_offset + (delta - inner_offset) * s;
  };

  const int grid = 2048;
  std::vector<double> ts(grid + 1), c1(grid + 1), c2(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    ts[i] = static_cast<double>(i) / grid;
    const LogDerivative ld = log_derivative(curve, ts[i]);
    const double off = offset(ts[i]);
    if (ld.c[1] / ld.c[0] - off <= 1e-9)
      throw CurvatureUnderflow(ts[i],
                               "curvature does not clear the offset at t = " +
                                   std::to_string(ts[i]));
    c1[i] = ld.c[0];
    c2[i] = -(ld.c[1] - ld.c[0] * off);
  }

  CoefficientPath coeffs;
  coeffs.dim = 3;
  coeffs.c = {piecewise_linear(ts, c1), piecewise_linear(ts, c2), ScalarPath{}};
  coeffs.quasi = true;

  AnalyticCurve out = solve_unique_curve(coeffs, 4096);
  out.label = tagged(curve.label, "rr");
  return out;
}

CurvePair hat_pair(const AnalyticCurve& curve, const RRParams& params) {
  CurvePair pair;
  pair.left = curve;
  pair.right = relax_reflect(curve, params);
  pair.z_left = lifted_frenet_path3(curve).back();
  pair.z_right = lifted_frenet_path3(pair.right).back();
  pair.locally_convex = params.delta > 0.0;
  return pair;
}

Mat4 rr_model_matrix(double eps, double delta) {
  const double theta = kPi / 4.0 + delta;
  const ImagQuat h_r{-std::cos(theta), 0.0, std::sin(theta)};
  return pi4(SpinPair{UnitQuat{}, quat_exp(-eps * h_r)});
}

}  // namespace locconvex
