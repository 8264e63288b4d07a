#ifndef LOCCONVEX_LINALG_HPP
#define LOCCONVEX_LINALG_HPP

#include <Eigen/Dense>
#include <random>

#include "locconvex/errors.hpp"

namespace locconvex {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

struct QRFactors {
  MatX frame;  // special orthogonal
  MatX upper;  // upper triangular, positive diagonal
};

/// Unique factorization m = frame * upper with positive diagonal pivots.
/// Throws SingularInput when a pivot falls below tol * max column norm and
/// NegativeOrientation when det(m) < 0.
QRFactors gram_schmidt_qr(const MatX& m, double tol = 1e-12);

/// Rectangular variant: m has at least as many rows as columns, frame gets
/// orthonormal columns and upper stays square with positive diagonal.
QRFactors thin_gram_schmidt(const MatX& m, double tol = 1e-12);

/// The unit vector completing orthonormal columns q to a positively oriented
/// orthonormal basis (cofactor expansion of det [q | u]).
VecX orientation_complement(const MatX& q);

bool is_special_orthogonal(const MatX& m, double tol = 1e-9);

void check_special_orthogonal(const MatX& m, double tol = 1e-9);

MatX random_special_orthogonal(int n, std::mt19937_64& rng);

/// Seed for randomized searches: LOCCONVEX_SEED from the environment when set,
/// otherwise the supplied fallback.
std::uint64_t resolve_seed(std::uint64_t fallback);

}  // namespace locconvex

#endif
