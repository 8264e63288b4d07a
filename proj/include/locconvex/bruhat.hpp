#ifndef LOCCONVEX_BRUHAT_HPP
#define LOCCONVEX_BRUHAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "locconvex/covering.hpp"
#include "locconvex/linalg.hpp"
#include "locconvex/quaternion.hpp"

namespace locconvex {

/// P(e_j) = sign[j] * e_image[j], everything 0-indexed.
struct SignedPermutation {
  int size = 0;
  std::vector<int> image;
  std::vector<int> sign;

  static SignedPermutation identity(int n);

  MatX matrix() const;
  int det() const;
  int inversions() const;
  /// Column of the pivot sitting in the given row.
  int column_of_row(int row) const;

  bool operator==(const SignedPermutation& other) const = default;
};

/// "P_<cycles>;<code>": cycles of the underlying permutation in 1-indexed
/// digits ("e" for the identity), then the column sign code read MSB first,
/// bit for column j set iff sign[j] = -1.
SignedPermutation parse_signed_perm(const std::string& text);
std::string format_signed_perm(const SignedPermutation& p);

/// Snap a matrix with entries near {0, +1, -1} to a signed permutation.
SignedPermutation signed_perm_from_matrix(const MatX& m, double tol = 1e-9);

struct DiagonalSign {
  std::vector<int> signs;

  explicit DiagonalSign(std::vector<int> s);
  MatX matrix() const;
  bool operator==(const DiagonalSign& other) const = default;
};

struct IdentifyResult {
  SignedPermutation cell;
  MatX u;   // unit diagonal upper triangular, u * q * u2 = cell.matrix()
  MatX u2;  // positive diagonal upper triangular
};

/// Totally positive style reduction of an invertible matrix to the signed
/// permutation representative of its cell. Pivot tolerance is absolute.
IdentifyResult identify_cell(const MatX& q, double tol = 1e-9);

/// Frame factor of u * q, the group action underlying the reduction.
MatX bruhat_action(const MatX& u, const MatX& q);

/// Pivots strictly north-east (resp. south-west) of position (row, col).
int ne_count(const SignedPermutation& p, int row, int col);
int sw_count(const SignedPermutation& p, int row, int col);

DiagonalSign delta_minus(const SignedPermutation& p);
DiagonalSign delta_plus(const SignedPermutation& p);
DiagonalSign delta_minus(const MatX& q);
DiagonalSign delta_plus(const MatX& q);

SignedPermutation chop_minus(const MatX& q);
SignedPermutation chop_plus(const MatX& q);

/// Antidiagonal matrix with entries (-1)^(i+1), size (sphere_dim + 1).
MatX arnold_matrix(int sphere_dim);
/// diag(1, -1, 1, ...), size (sphere_dim + 1).
MatX jplus(int sphere_dim);
/// Diagonal of size m: the first (m - s)/2 entries -1, the rest +1.
/// BadSignature unless |s| <= m and s = m (mod 2).
MatX m_s_matrix(int m, int s);

MatX tr_matrix(const MatX& q);
MatX ad_matrix(const MatX& q);

struct SpinCellRep {
  SpinPair rep;   // snapped exactly onto the binary octahedral grid
  SignedPermutation cell;

  bool operator==(const SpinCellRep& other) const;
};

/// Nearest exact grid value in {0, +-1/2, +-1/sqrt2, +-1}.
double snap_component(double x, double tol = 1e-6);
SpinPair spin_snap(const SpinPair& z, double tol = 1e-6);

/// Cell representative above identify_cell, carried along an in-cell path.
SpinCellRep identify_cell_spin(const SpinPair& z);

/// Cell of the lifted frame just before (resp. after) z along the standard
/// convex flow; the step is halved until two classifications agree.
SpinCellRep chop_minus_spin(const SpinPair& z);
SpinCellRep chop_plus_spin(const SpinPair& z);

struct ConvexTableEntry {
  int dim;
  SpinPair spin;
  SignedPermutation cell;
  SpinPair future_spin;
  SignedPermutation future_cell;
};

/// The 24 final lifted frames reachable by convex arcs, with the cell each one
/// flows into. Stored as data; consistency is enforced by the test suite.
const std::vector<ConvexTableEntry>& convex_table();

std::optional<std::size_t> find_convex_entry(const SpinPair& z);
bool is_convex_spin(const SpinPair& z);
bool is_stably_convex_spin(const SpinPair& z);

}  // namespace locconvex

#endif
