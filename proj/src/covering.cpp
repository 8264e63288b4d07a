#include "locconvex/covering.hpp"

#include <cmath>
#include <string>

namespace locconvex {

Mat3 pi3(const UnitQuat& z) {
  const double a = z.a(), b = z.b(), c = z.c(), d = z.d();
  Mat3 m;
  m << a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (a * c + b * d),
      2.0 * (a * d + b * c), a * a - b * b + c * c - d * d, 2.0 * (c * d - a * b),
      2.0 * (b * d - a * c), 2.0 * (a * b + c * d), a * a - b * b - c * c + d * d;
  return m;
}

Mat4 pi4(const SpinPair& z) {
  const double al = z.left.a(), bl = z.left.b(), cl = z.left.c(), dl = z.left.d();
  const double ar = z.right.a(), br = z.right.b(), cr = z.right.c(), dr = z.right.d();
  Mat4 m;
  m.col(0) << al * ar + bl * br + cl * cr + dl * dr,
      -al * br + bl * ar - cl * dr + dl * cr,
      -al * cr + bl * dr + cl * ar - dl * br,
      -al * dr - bl * cr + cl * br + dl * ar;
  m.col(1) << al * br - bl * ar - cl * dr + dl * cr,
      al * ar + bl * br - cl * cr - dl * dr,
      al * dr + bl * cr + cl * br + dl * ar,
      -al * cr + bl * dr - cl * ar + dl * br;
  m.col(2) << al * cr + bl * dr - cl * ar - dl * br,
      -al * dr + bl * cr + cl * br - dl * ar,
      al * ar - bl * br + cl * cr - dl * dr,
      al * br + bl * ar + cl * dr + dl * cr;
  m.col(3) << al * dr - bl * cr + cl * br - dl * ar,
      al * cr + bl * dr + cl * ar + dl * br,
      -al * br - bl * ar + cl * dr + dl * cr,
      al * ar - bl * br - cl * cr + dl * dr;
  return m;
}

Mat3 dpi3(const ImagQuat& h) {
  Mat3 m;
  m << 0.0, -2.0 * h.d, 2.0 * h.c,
      2.0 * h.d, 0.0, -2.0 * h.b,
      -2.0 * h.c, 2.0 * h.b, 0.0;
  return m;
}

Mat4 dpi4(const ImagQuat& hl, const ImagQuat& hr) {
  const double bm = hl.b - hr.b, cm = hl.c - hr.c, dm = hl.d - hr.d;
  const double bp = hl.b + hr.b, cp = hl.c + hr.c, dp = hl.d + hr.d;
  Mat4 m;
  m << 0.0, -bm, -cm, -dm,
      bm, 0.0, -dp, cp,
      cm, dp, 0.0, -bp,
      dm, -cp, bp, 0.0;
  return m;
}

namespace {

void check_skew(const MatX& m, double tol) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol)
    throw NotSkew("matrix is not skew symmetric within tolerance");
}

}  // namespace

ImagQuat so3_split(const Mat3& lambda, double tol) {
  check_skew(lambda, tol);
  return {lambda(2, 1) / 2.0, lambda(0, 2) / 2.0, lambda(1, 0) / 2.0};
}

std::pair<ImagQuat, ImagQuat> so4_split(const Mat4& lambda, double tol) {
  check_skew(lambda, tol);
  const double bm = lambda(1, 0), cm = lambda(2, 0), dm = lambda(3, 0);
  const double dp = lambda(2, 1), cp = -lambda(3, 1), bp = lambda(3, 2);
  ImagQuat hl{(bm + bp) / 2.0, (cm + cp) / 2.0, (dm + dp) / 2.0};
  ImagQuat hr{(bp - bm) / 2.0, (cp - cm) / 2.0, (dp - dm) / 2.0};
  return {hl, hr};
}

Mat3 exp_so3(const Mat3& lambda) { return pi3(quat_exp(so3_split(lambda))); }

Mat4 exp_so4(const Mat4& lambda) {
  auto [hl, hr] = so4_split(lambda);
  return pi4({quat_exp(hl), quat_exp(hr)});
}

UnitQuat pi3_inverse(const Mat3& r, double ortho_tol) {
  check_special_orthogonal(r, ortho_tol);
  const double t = r.trace();
  const double u0 = 1.0 + t;
  const double u1 = 1.0 + 2.0 * r(0, 0) - t;
  const double u2 = 1.0 + 2.0 * r(1, 1) - t;
  const double u3 = 1.0 + 2.0 * r(2, 2) - t;
  Quat q;
  if (u0 >= u1 && u0 >= u2 && u0 >= u3) {
    const double a = 0.5 * std::sqrt(u0);
    q = {a, (r(2, 1) - r(1, 2)) / (4.0 * a), (r(0, 2) - r(2, 0)) / (4.0 * a),
         (r(1, 0) - r(0, 1)) / (4.0 * a)};
  } else if (u1 >= u2 && u1 >= u3) {
    const double b = 0.5 * std::sqrt(u1);
    q = {(r(2, 1) - r(1, 2)) / (4.0 * b), b, (r(1, 0) + r(0, 1)) / (4.0 * b),
         (r(0, 2) + r(2, 0)) / (4.0 * b)};
  } else if (u2 >= u3) {
    const double c = 0.5 * std::sqrt(u2);
    q = {(r(0, 2) - r(2, 0)) / (4.0 * c), (r(1, 0) + r(0, 1)) / (4.0 * c), c,
         (r(2, 1) + r(1, 2)) / (4.0 * c)};
  } else {
    const double d = 0.5 * std::sqrt(u3);
    q = {(r(1, 0) - r(0, 1)) / (4.0 * d), (r(0, 2) + r(2, 0)) / (4.0 * d),
         (r(2, 1) + r(1, 2)) / (4.0 * d), d};
  }
  return UnitQuat::normalized(q);
}

SpinPair pi4_inverse(const Mat4& f, double ortho_tol) {
  check_special_orthogonal(f, ortho_tol);
  const Quat q1 = Quat::from_vec(f.col(0));
  // conj(q1) * f maps u to zr u conj(zr): it fixes 1 and rotates Im H by pi3(zr).
  const Mat4 c = left_mult_matrix(conj(q1)) * f;
  Mat3 block = c.block<3, 3>(1, 1);
  block = (1.0 / q1.squared_norm()) * block;
  const UnitQuat zr = pi3_inverse(block, ortho_tol);
  const UnitQuat zl = UnitQuat::normalized(q1 * zr.q());
  return {zl, zr};
}

namespace {

constexpr double kLiftGate = 0.70710678118654752;  // sqrt(2)/2

template <typename Spin, typename Frame, typename Inverse>
std::vector<Spin> lift_impl(const std::vector<Frame>& frames, const Spin& z0, Inverse inv,
                            double (*pair_dot)(const Spin&, const Spin&),
                            Spin (*negate)(const Spin&)) {
  std::vector<Spin> out;
  out.reserve(frames.size());
  if (frames.empty()) return out;
  out.push_back(z0);
  for (std::size_t k = 1; k < frames.size(); ++k) {
    Spin cand = inv(frames[k]);
    double align = pair_dot(cand, out.back());
    if (align < 0.0) {
      cand = negate(cand);
      align = -align;
    }
    if (align <= kLiftGate)
      throw StepTooLarge(k, "consecutive frames too far apart to lift at step " +
                                std::to_string(k));
    out.push_back(cand);
  }
  return out;
}

double spin3_dot(const UnitQuat& p, const UnitQuat& q) { return dot(p, q); }
UnitQuat spin3_neg(const UnitQuat& q) { return -q; }

double spin4_dot(const SpinPair& p, const SpinPair& q) {
  return std::min(dot(p.left, q.left), dot(p.right, q.right));
}
SpinPair spin4_neg(const SpinPair& q) { return -q; }

}  // namespace

std::vector<UnitQuat> lift_path_so3_from(const std::vector<Mat3>& frames, const UnitQuat& z0) {
  return lift_impl<UnitQuat, Mat3>(frames, z0, [](const Mat3& m) { return pi3_inverse(m); },
                                   spin3_dot, spin3_neg);
}

std::vector<SpinPair> lift_path_so4_from(const std::vector<Mat4>& frames, const SpinPair& z0) {
  return lift_impl<SpinPair, Mat4>(frames, z0, [](const Mat4& m) { return pi4_inverse(m); },
                                   spin4_dot, spin4_neg);
}

std::vector<UnitQuat> lift_path_so3(const std::vector<Mat3>& frames) {
  if (!frames.empty() && (frames.front() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidInput("lift requires the path to start at the identity frame");
  return lift_path_so3_from(frames, UnitQuat());
}

std::vector<SpinPair> lift_path_so4(const std::vector<Mat4>& frames) {
  if (!frames.empty() && (frames.front() - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidInput("lift requires the path to start at the identity frame");
  return lift_path_so4_from(frames, SpinPair());
}

}  // namespace locconvex
