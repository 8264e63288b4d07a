#ifndef LOCCONVEX_COVERING_HPP
#define LOCCONVEX_COVERING_HPP

#include <utility>
#include <vector>

#include "locconvex/linalg.hpp"
#include "locconvex/quaternion.hpp"

namespace locconvex {

/// Rotation h -> z h conj(z) of the imaginary quaternions in the basis (i, j, k).
Mat3 pi3(const UnitQuat& z);

/// Rotation u -> zl u conj(zr) of the quaternions in the basis (1, i, j, k).
Mat4 pi4(const SpinPair& z);

/// Differential of pi3 at the unit: h acts by u -> h u - u h on imaginary u.
Mat3 dpi3(const ImagQuat& h);

/// Differential of pi4 at the unit: (hl, hr) acts by u -> hl u - u hr.
Mat4 dpi4(const ImagQuat& hl, const ImagQuat& hr);

/// Inverse of dpi3 on skew matrices; NotSkew when the input is not skew within tol.
ImagQuat so3_split(const Mat3& lambda, double tol = 1e-9);

/// Inverse of dpi4 on skew matrices; NotSkew when the input is not skew within tol.
std::pair<ImagQuat, ImagQuat> so4_split(const Mat4& lambda, double tol = 1e-9);

/// exp of a skew matrix computed through the half-spin closed forms.
Mat3 exp_so3(const Mat3& lambda);
Mat4 exp_so4(const Mat4& lambda);

/// One preimage of a rotation under pi3 (the other is its negative).
UnitQuat pi3_inverse(const Mat3& r, double ortho_tol = 1e-6);

/// One preimage of a rotation under pi4 (the other is its componentwise negative).
SpinPair pi4_inverse(const Mat4& f, double ortho_tol = 1e-6);

/// Continuous lift of a frame path starting at the unit spin; frames[0] must be
/// the identity. StepTooLarge(k) when consecutive preimages sit farther apart
/// than the quarter turn gate (inner product sqrt(2)/2).
std::vector<UnitQuat> lift_path_so3(const std::vector<Mat3>& frames);
std::vector<SpinPair> lift_path_so4(const std::vector<Mat4>& frames);

/// Lift starting from a prescribed preimage of frames[0].
std::vector<UnitQuat> lift_path_so3_from(const std::vector<Mat3>& frames, const UnitQuat& z0);
std::vector<SpinPair> lift_path_so4_from(const std::vector<Mat4>& frames, const SpinPair& z0);

}  // namespace locconvex

#endif
