#include "locconvex/curves.hpp"

#include <cmath>
#include <limits>

#include "locconvex/covering.hpp"

namespace locconvex {

MatX LogDerivative::matrix() const {
  MatX m = MatX::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    m(i + 1, i) = c[i];
    m(i, i + 1) = -c[i];
  }
  return m;
}

FrenetSample frenet(const AnalyticCurve& curve, double t) {
  const Jet jet = curve.jet(t);
  const int n = curve.dim;

  QRFactors qr;
  try {
    qr = thin_gram_schmidt(jet.cols.leftCols(n - 1));
  } catch (const SingularInput&) {
    throw NotGeneric(t, "derivative columns degenerate at t = " + std::to_string(t));
  }

  FrenetSample s;
  s.t = t;
  s.frame.resize(n, n);
  s.frame.leftCols(n - 1) = qr.frame;
  s.frame.col(n - 1) = orientation_complement(qr.frame);
  s.speed = qr.upper(1, 1);
  if (n == 3) {
    s.kappa = s.frame.col(2).dot(jet.d2()) / (s.speed * s.speed);
  } else {
    s.kappa = qr.upper(2, 2) / (s.speed * s.speed);
    s.tau = s.frame.col(3).dot(jet.d3()) / (qr.upper(1, 1) * qr.upper(2, 2));
  }
  return s;
}

LogDerivative log_derivative(const AnalyticCurve& curve, double t) {
  const FrenetSample s = frenet(curve, t);
  LogDerivative ld;
  ld.dim = curve.dim;
  ld.c[0] = s.speed;
  ld.c[1] = s.speed * s.kappa;
  if (curve.dim == 4) ld.c[2] = s.speed * s.tau;
  return ld;
}

ScanResult is_locally_convex(const AnalyticCurve& curve, int grid) {
  ScanResult r;
  r.ok = true;
  r.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    const Jet jet = curve.jet(t);
    const double det = jet.cols.leftCols(curve.dim).determinant();
    if (det < r.margin) {
      r.margin = det;
      r.witness = t;
    }
  }
  r.ok = r.margin > 0.0;
  return r;
}

ScanResult is_generic(const AnalyticCurve& curve, int grid) {
  ScanResult r;
  r.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    const Jet jet = curve.jet(t);
    QRFactors qr;
    try {
      qr = thin_gram_schmidt(jet.cols.leftCols(curve.dim - 1));
    } catch (const SingularInput&) {
      r.ok = false;
      r.margin = 0.0;
      r.witness = t;
      return r;
    }
    const double pivot = qr.upper(curve.dim - 2, curve.dim - 2);
    if (pivot < r.margin) {
      r.margin = pivot;
      r.witness = t;
    }
  }
  r.ok = true;
  return r;
}

AnalyticCurve circle_sigma(double c) {
  if (!(c > 0.0) || !(c <= 2.0 * kPi)) throw BadLength("circle length must lie in (0, 2*pi]");
  const double rho = std::asin(c / (2.0 * kPi));
  const double cr = std::cos(rho);
  const double sr = std::sin(rho);
  const double w = 2.0 * kPi;

  AnalyticCurve curve;
  curve.dim = 3;
  curve.label = "sigma(" + std::to_string(c) + ")";
  curve.eval = [cr, sr, w](double t) {
    Jet jet;
    jet.cols.resize(3, 4);
    double pw = 1.0;
    for (int j = 0; j < 4; ++j) {
      const double ph = w * t + 0.5 * kPi * j;
      const double co = std::cos(ph);
      const double si = std::sin(ph);
      jet.cols(0, j) = sr * sr * pw * co;
      jet.cols(1, j) = sr * pw * si;
      jet.cols(2, j) = -sr * cr * pw * co;
      pw *= w;
    }
    jet.cols(0, 0) += cr * cr;
    jet.cols(2, 0) += cr * sr;
    return jet;
  };
  return curve;
}

AnalyticCurve iterate(const AnalyticCurve& curve, double k) {
  AnalyticCurve out;
  out.dim = curve.dim;
  out.label = curve.label + "^" + std::to_string(k);
  out.eval = [base = curve.eval, k](double t) {
    const double s = k * t;
    double u = s - std::floor(s);
    if (u == 0.0 && s > 0.0) u = 1.0;
    Jet jet = base(u);
    double pw = k;
    for (int j = 1; j < 4; ++j) {
      jet.cols.col(j) *= pw;
      pw *= k;
    }
    return jet;
  };
  return out;
}

namespace {

struct TwoFrequency {
  double amp_a, freq_a;
  double amp_b, freq_b;
  double weight;
};

AnalyticCurve two_frequency_curve(std::string label, TwoFrequency f) {
  AnalyticCurve curve;
  curve.dim = 4;
  curve.label = std::move(label);
  curve.eval = [f](double t) {
    Jet jet;
    jet.cols.resize(4, 4);
    double pa = 1.0;
    double pb = 1.0;
    for (int j = 0; j < 4; ++j) {
      const double ph = 0.5 * kPi * j;
      const double ca = std::cos(f.freq_a * t + ph);
      const double sa = std::sin(f.freq_a * t + ph);
      const double cb = std::cos(f.freq_b * t + ph);
      const double sb = std::sin(f.freq_b * t + ph);
      jet.cols(0, j) = f.amp_a * pa * ca + f.amp_b * pb * cb;
      jet.cols(1, j) = f.weight * (pa * sa + pb * sb);
      jet.cols(2, j) = f.weight * (pb * cb - pa * ca);
      jet.cols(3, j) = f.amp_b * pb * sb - f.amp_a * pa * sa;
      pa *= f.freq_a;
      pb *= f.freq_b;
    }
    return jet;
  };
  return curve;
}

}  // namespace

AnalyticCurve gamma1(int m) {
  return two_frequency_curve("gamma1^" + std::to_string(m),
                             {0.25, 1.5 * kPi * m, 0.75, 0.5 * kPi * m, std::sqrt(3.0) / 4.0});
}

AnalyticCurve gamma2(int m) {
  return two_frequency_curve("gamma2^" + std::to_string(m),
                             {0.375, 2.5 * kPi * m, 0.625, 1.5 * kPi * m, std::sqrt(15.0) / 8.0});
}

AnalyticCurve gamma3(int m) {
  return two_frequency_curve(
      "gamma3^" + std::to_string(m),
      {1.0 / 3.0, 4.0 * kPi * m, 2.0 / 3.0, 2.0 * kPi * m, std::sqrt(2.0) / 3.0});
}

AnalyticCurve gamma4(int m) {
  return two_frequency_curve(
      "gamma4^" + std::to_string(m),
      {1.0 / 6.0, 5.0 * kPi * m, 5.0 / 6.0, 1.0 * kPi * m, std::sqrt(5.0) / 6.0});
}

std::vector<FrenetSample> frenet_path(const AnalyticCurve& curve, int steps) {
  std::vector<FrenetSample> out;
  out.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) out.push_back(frenet(curve, static_cast<double>(k) / steps));
  return out;
}

namespace {

constexpr int kMaxLiftSteps = 1 << 16;

template <typename Spin, typename Frame, typename LiftFn>
std::vector<Spin> lifted_path_impl(const AnalyticCurve& curve, int steps, LiftFn lift) {
  for (int fine = steps;; fine *= 2) {
    std::vector<Frame> frames;
    frames.reserve(fine + 1);
    for (int k = 0; k <= fine; ++k)
      frames.push_back(frenet(curve, static_cast<double>(k) / fine).frame);
    try {
      std::vector<Spin> z = lift(frames);
      const int stride = fine / steps;
      if (stride == 1) return z;
      std::vector<Spin> out;
      out.reserve(steps + 1);
      for (int k = 0; k <= steps; ++k) out.push_back(z[static_cast<std::size_t>(k) * stride]);
      return out;
    } catch (const StepTooLarge&) {
      if (fine >= kMaxLiftSteps) throw;
    }
  }
}

}  // namespace

std::vector<UnitQuat> lifted_frenet_path3(const AnalyticCurve& curve, int steps) {
  return lifted_path_impl<UnitQuat, Mat3>(
      curve, steps, [](const std::vector<Mat3>& f) { return lift_path_so3(f); });
}

std::vector<SpinPair> lifted_frenet_path4(const AnalyticCurve& curve, int steps) {
  return lifted_path_impl<SpinPair, Mat4>(
      curve, steps, [](const std::vector<Mat4>& f) { return lift_path_so4(f); });
}

}  // namespace locconvex
