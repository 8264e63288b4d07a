#include "locconvex/linalg.hpp"

#include <cstdlib>
#include <string>

namespace locconvex {

QRFactors gram_schmidt_qr(const MatX& m, double tol) {
  const auto n = m.rows();
  if (n != m.cols() || n == 0) throw InvalidInput("square matrix expected");

  double scale = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, m.col(j).norm());
  if (scale == 0.0) throw SingularInput("zero matrix");

  Eigen::HouseholderQR<MatX> qr(m);
  MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
  MatX f = qr.householderQ() * MatX::Identity(n, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double pivot = std::abs(r(i, i));
    if (pivot < tol * scale)
      throw SingularInput("pivot " + std::to_string(i + 1) + " below tolerance");
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      f.col(i) = -f.col(i);
    }
  }

  if (f.determinant() < 0.0) throw NegativeOrientation("matrix has negative determinant");

  return {std::move(f), std::move(r)};
}

QRFactors thin_gram_schmidt(const MatX& m, double tol) {
  const auto rows = m.rows();
  const auto cols = m.cols();
  if (cols == 0 || rows < cols) throw InvalidInput("tall matrix expected");

  double scale = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) scale = std::max(scale, m.col(j).norm());
  if (scale == 0.0) throw SingularInput("zero matrix");

  Eigen::HouseholderQR<MatX> qr(m);
  MatX r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  MatX f = qr.householderQ() * MatX::Identity(rows, cols);

  for (Eigen::Index i = 0; i < cols; ++i) {
    const double pivot = std::abs(r(i, i));
    if (pivot < tol * scale)
      throw SingularInput("pivot " + std::to_string(i + 1) + " below tolerance");
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      f.col(i) = -f.col(i);
    }
  }

  return {std::move(f), std::move(r)};
}

VecX orientation_complement(const MatX& q) {
  const auto n = q.rows();
  if (q.cols() != n - 1 || n < 2) throw InvalidInput("n x (n-1) matrix expected");

  VecX u(n);
  MatX minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    minor.topRows(i) = q.topRows(i);
    minor.bottomRows(n - 1 - i) = q.bottomRows(n - 1 - i);
    const double sign = ((i + n) % 2 == 0) ? -1.0 : 1.0;
    u(i) = sign * minor.determinant();
  }
  return u;
}

bool is_special_orthogonal(const MatX& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const auto n = m.rows();
  if ((m.transpose() * m - MatX::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  return m.determinant() > 0.0;
}

void check_special_orthogonal(const MatX& m, double tol) {
  if (!is_special_orthogonal(m, tol))
    throw NotSpecialOrthogonal("matrix is not special orthogonal within tolerance");
}

MatX random_special_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    MatX m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
    try {
      MatX f = gram_schmidt_qr(m).frame;
      return f;
    } catch (const NegativeOrientation&) {
      continue;
    } catch (const SingularInput&) {
      continue;
    }
  }
}

std::uint64_t resolve_seed(std::uint64_t fallback) {
  if (const char* env = std::getenv("LOCCONVEX_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return fallback;
}

}  // namespace locconvex
