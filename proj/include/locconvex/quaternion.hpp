#ifndef LOCCONVEX_QUATERNION_HPP
#define LOCCONVEX_QUATERNION_HPP

#include <Eigen/Dense>
#include <cmath>

#include "locconvex/errors.hpp"

namespace locconvex {

struct Quat {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static Quat from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  Eigen::Vector4d vec() const { return {a, b, c, d}; }
  double squared_norm() const { return a * a + b * b + c * c + d * d; }
  double norm() const { return std::sqrt(squared_norm()); }
};

inline Quat operator+(const Quat& p, const Quat& q) {
  return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
}

inline Quat operator-(const Quat& p, const Quat& q) {
  return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
}

inline Quat operator-(const Quat& q) { return {-q.a, -q.b, -q.c, -q.d}; }

inline Quat operator*(double s, const Quat& q) { return {s * q.a, s * q.b, s * q.c, s * q.d}; }

inline Quat operator*(const Quat& p, const Quat& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

inline Quat conj(const Quat& q) { return {q.a, -q.b, -q.c, -q.d}; }

inline double dot(const Quat& p, const Quat& q) {
  return p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d;
}

/// Matrix of u -> q*u in the basis (1, i, j, k).
inline Eigen::Matrix4d left_mult_matrix(const Quat& q) {
  Eigen::Matrix4d m;
  m << q.a, -q.b, -q.c, -q.d,
       q.b,  q.a, -q.d,  q.c,
       q.c,  q.d,  q.a, -q.b,
       q.d, -q.c,  q.b,  q.a;
  return m;
}

struct ImagQuat {
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  Quat quat() const { return {0.0, b, c, d}; }
  double norm() const { return std::sqrt(b * b + c * c + d * d); }
};

inline ImagQuat operator*(double s, const ImagQuat& h) { return {s * h.b, s * h.c, s * h.d}; }

inline ImagQuat operator+(const ImagQuat& g, const ImagQuat& h) {
  return {g.b + h.b, g.c + h.c, g.d + h.d};
}

inline ImagQuat operator-(const ImagQuat& g, const ImagQuat& h) {
  return {g.b - h.b, g.c - h.c, g.d - h.d};
}

class UnitQuat {
 public:
  explicit UnitQuat(const Quat& q, double tol = 1e-12) : q_(q) {
    if (std::abs(q.norm() - 1.0) > tol) throw NotUnit("quaternion norm differs from 1");
  }

  UnitQuat() : q_{1.0, 0.0, 0.0, 0.0} {}

  static UnitQuat normalized(const Quat& q) {
    const double n = q.norm();
    if (n < 1e-300) throw SingularInput("cannot normalize a zero quaternion");
    UnitQuat u;
    u.q_ = (1.0 / n) * q;
    return u;
  }

  const Quat& q() const { return q_; }
  double a() const { return q_.a; }
  double b() const { return q_.b; }
  double c() const { return q_.c; }
  double d() const { return q_.d; }

  UnitQuat conjugate() const {
    UnitQuat u;
    u.q_ = conj(q_);
    return u;
  }

  UnitQuat operator-() const {
    UnitQuat u;
    u.q_ = -q_;
    return u;
  }

  Eigen::Vector4d vec() const { return q_.vec(); }

 private:
  Quat q_;
};

inline UnitQuat operator*(const UnitQuat& p, const UnitQuat& q) {
  return UnitQuat::normalized(p.q() * q.q());
}

inline double dot(const UnitQuat& p, const UnitQuat& q) { return dot(p.q(), q.q()); }

inline double distance(const UnitQuat& p, const UnitQuat& q) { return (p.q() - q.q()).norm(); }

inline bool approx_equal(const UnitQuat& p, const UnitQuat& q, double tol) {
  return distance(p, q) <= tol;
}

struct SpinPair {
  UnitQuat left;
  UnitQuat right;

  SpinPair() = default;
  SpinPair(UnitQuat l, UnitQuat r) : left(std::move(l)), right(std::move(r)) {}

  SpinPair operator-() const { return {-left, -right}; }
};

inline SpinPair operator*(const SpinPair& p, const SpinPair& q) {
  return {p.left * q.left, p.right * q.right};
}

inline double distance(const SpinPair& p, const SpinPair& q) {
  return std::max(distance(p.left, q.left), distance(p.right, q.right));
}

inline bool approx_equal(const SpinPair& p, const SpinPair& q, double tol) {
  return distance(p, q) <= tol;
}

/// exp(h) for imaginary h; switches to the two-term sinc series below 1e-8.
inline UnitQuat quat_exp(const ImagQuat& h) {
  const double theta = h.norm();
  double s;
  if (theta < 1e-8) {
    s = 1.0 - theta * theta / 6.0;
  } else {
    s = std::sin(theta) / theta;
  }
  return UnitQuat::normalized(Quat{std::cos(theta), s * h.b, s * h.c, s * h.d});
}

/// Inverse of quat_exp on the half space a > -1; the zero rotation maps to zero.
inline ImagQuat quat_log(const UnitQuat& z) {
  const Quat& q = z.q();
  const double vnorm = std::sqrt(q.b * q.b + q.c * q.c + q.d * q.d);
  if (vnorm < 1e-300) return {0.0, 0.0, 0.0};
  const double theta = std::atan2(vnorm, q.a);
  const double f = theta / vnorm;
  return {f * q.b, f * q.c, f * q.d};
}

}  // namespace locconvex

#endif
