#include "locconvex/bruhat.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

namespace locconvex {

SignedPermutation SignedPermutation::identity(int n) {
  SignedPermutation p;
  p.size = n;
  p.image.resize(n);
  std::iota(p.image.begin(), p.image.end(), 0);
  p.sign.assign(n, 1);
  return p;
}

MatX SignedPermutation::matrix() const {
  MatX m = MatX::Zero(size, size);
  for (int j = 0; j < size; ++j) m(image[j], j) = sign[j];
  return m;
}

int SignedPermutation::det() const {
  int parity = 1;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j)
      if (image[i] > image[j]) parity = -parity;
  for (int j = 0; j < size; ++j) parity *= sign[j];
  return parity;
}

int SignedPermutation::inversions() const {
  int count = 0;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j)
      if (image[i] > image[j]) ++count;
  return count;
}

int SignedPermutation::column_of_row(int row) const {
  for (int j = 0; j < size; ++j)
    if (image[j] == row) return j;
  throw InvalidInput("row has no pivot");
}

SignedPermutation parse_signed_perm(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(pos, msg + " at position " + std::to_string(pos));
  };

  if (text.rfind("P_", 0) != 0) throw fail("expected prefix P_");
  pos = 2;

  std::vector<std::vector<int>> cycles;
  int max_digit = 0;
  if (pos < text.size() && text[pos] == 'e') {
    ++pos;
  } else {
    while (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<int> cycle;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        const int digit = text[pos] - '0';
        if (digit == 0) throw fail("cycle entries are 1-indexed");
        cycle.push_back(digit - 1);
        max_digit = std::max(max_digit, digit);
        ++pos;
      }
      if (pos >= text.size() || text[pos] != ')') throw fail("unterminated cycle");
      ++pos;
      if (cycle.size() < 2) throw fail("cycle needs at least two entries");
      cycles.push_back(std::move(cycle));
    }
    if (cycles.empty()) throw fail("expected cycles or e");
  }

  if (pos >= text.size() || text[pos] != ';') throw fail("expected ;");
  ++pos;
  if (pos >= text.size()) throw fail("expected sign code");
  std::size_t code_start = pos;
  unsigned long code = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    code = code * 10 + static_cast<unsigned long>(text[pos] - '0');
    ++pos;
  }
  if (pos == code_start) throw fail("expected sign code");
  if (pos != text.size()) throw fail("trailing characters");

  const int n = std::max(max_digit, 4);
  SignedPermutation p = SignedPermutation::identity(n);
  for (const auto& cycle : cycles) {
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int from = cycle[k];
      const int to = cycle[(k + 1) % cycle.size()];
      if (from >= n || to >= n) {
        pos = code_start;
        throw fail("cycle entry exceeds dimension");
      }
      p.image[from] = to;
    }
  }
  {
    std::vector<int> seen(n, 0);
    for (int j = 0; j < n; ++j) seen[p.image[j]] += 1;
    for (int r = 0; r < n; ++r)
      if (seen[r] != 1) {
        pos = 2;
        throw fail("cycles do not describe a permutation");
      }
  }
  if (code >= (1ul << n)) {
    pos = code_start;
    throw fail("sign code out of range");
  }
  for (int j = 0; j < n; ++j) {
    const bool neg = (code >> (n - 1 - j)) & 1ul;
    p.sign[j] = neg ? -1 : 1;
  }
  return p;
}

std::string format_signed_perm(const SignedPermutation& p) {
  std::string cycles;
  std::vector<bool> used(p.size, false);
  for (int start = 0; start < p.size; ++start) {
    if (used[start] || p.image[start] == start) continue;
    std::string cycle = "(" + std::to_string(start + 1);
    used[start] = true;
    for (int j = p.image[start]; j != start; j = p.image[j]) {
      cycle += std::to_string(j + 1);
      used[j] = true;
    }
    cycle += ")";
    cycles += cycle;
  }
  if (cycles.empty()) cycles = "e";
  unsigned long code = 0;
  for (int j = 0; j < p.size; ++j) code = (code << 1) | (p.sign[j] < 0 ? 1ul : 0ul);
  return "P_" + cycles + ";" + std::to_string(code);
}

SignedPermutation signed_perm_from_matrix(const MatX& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw InvalidInput("square matrix expected");
  SignedPermutation p;
  p.size = n;
  p.image.assign(n, -1);
  p.sign.assign(n, 0);
  std::vector<bool> row_used(n, false);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = m(i, j);
      if (std::abs(v) <= tol) continue;
      if (std::abs(std::abs(v) - 1.0) > tol || p.sign[j] != 0 || row_used[i])
        throw InvalidInput("matrix is not a signed permutation");
      p.image[j] = i;
      p.sign[j] = v > 0 ? 1 : -1;
      row_used[i] = true;
    }
    if (p.sign[j] == 0) throw InvalidInput("matrix is not a signed permutation");
  }
  return p;
}

DiagonalSign::DiagonalSign(std::vector<int> s) : signs(std::move(s)) {
  int prod = 1;
  for (int v : signs) {
    if (v != 1 && v != -1) throw InvalidInput("diagonal sign entries must be +-1");
    prod *= v;
  }
  if (prod != 1) throw InvalidInput("diagonal sign must have determinant one");
}

MatX DiagonalSign::matrix() const {
  const int n = static_cast<int>(signs.size());
  MatX m = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = signs[i];
  return m;
}

IdentifyResult identify_cell(const MatX& q, double tol) {
  const int n = static_cast<int>(q.rows());
  if (q.cols() != n || n == 0) throw InvalidInput("square matrix expected");

  MatX m = q;
  MatX u = MatX::Identity(n, n);
  MatX u2 = MatX::Identity(n, n);
  std::vector<bool> assigned(n, false);

  SignedPermutation p;
  p.size = n;
  p.image.assign(n, -1);
  p.sign.assign(n, 0);

  for (int j = 0; j < n; ++j) {
    int pivot = -1;
    for (int i = n - 1; i >= 0; --i) {
      if (!assigned[i] && std::abs(m(i, j)) > tol) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) throw DegeneratePivot(j, "no admissible pivot in column " + std::to_string(j + 1));

    const double pv = m(pivot, j);
    for (int i = 0; i < pivot; ++i) {
      const double mu = m(i, j) / pv;
      if (mu == 0.0) continue;
      m.row(i) -= mu * m.row(pivot);
      u.row(i) -= mu * u.row(pivot);
    }
    for (int j2 = j + 1; j2 < n; ++j2) {
      const double mu = m(pivot, j2) / pv;
      if (mu == 0.0) continue;
      m.col(j2) -= mu * m.col(j);
      u2.col(j2) -= mu * u2.col(j);
    }
    const double s = std::abs(pv);
    m.col(j) /= s;
    u2.col(j) /= s;

    assigned[pivot] = true;
    p.image[j] = pivot;
    p.sign[j] = pv > 0 ? 1 : -1;
  }

  return {std::move(p), std::move(u), std::move(u2)};
}

MatX bruhat_action(const MatX& u, const MatX& q) { return gram_schmidt_qr(u * q).frame; }

int ne_count(const SignedPermutation& p, int row, int col) {
  int count = 0;
  for (int j = 0; j < p.size; ++j)
    if (p.image[j] < row && j > col) ++count;
  return count;
}

int sw_count(const SignedPermutation& p, int row, int col) {
  int count = 0;
  for (int j = 0; j < p.size; ++j)
    if (p.image[j] > row && j < col) ++count;
  return count;
}

namespace {

DiagonalSign delta_impl(const SignedPermutation& p, bool minus) {
  std::vector<int> signs(p.size, 1);
  for (int j = 0; j < p.size; ++j) {
    const int row = p.image[j];
    const int count = minus ? ne_count(p, row, j) : sw_count(p, row, j);
    signs[row] = p.sign[j] * ((count % 2 == 0) ? 1 : -1);
  }
  return DiagonalSign(std::move(signs));
}

}  // namespace

DiagonalSign delta_minus(const SignedPermutation& p) { return delta_impl(p, true); }
DiagonalSign delta_plus(const SignedPermutation& p) { return delta_impl(p, false); }

DiagonalSign delta_minus(const MatX& q) { return delta_minus(identify_cell(q).cell); }
DiagonalSign delta_plus(const MatX& q) { return delta_plus(identify_cell(q).cell); }

SignedPermutation chop_minus(const MatX& q) {
  const int n = static_cast<int>(q.rows());
  const MatX a = arnold_matrix(n - 1);
  return signed_perm_from_matrix(delta_minus(q).matrix() * a);
}

SignedPermutation chop_plus(const MatX& q) {
  const int n = static_cast<int>(q.rows());
  const MatX at = arnold_matrix(n - 1).transpose();
  return signed_perm_from_matrix(delta_plus(q).matrix() * at);
}

MatX arnold_matrix(int sphere_dim) {
  const int n = sphere_dim + 1;
  MatX a = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, n - 1 - i) = (i % 2 == 0) ? 1.0 : -1.0;
  return a;
}

MatX jplus(int sphere_dim) {
  const int n = sphere_dim + 1;
  MatX j = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return j;
}

MatX m_s_matrix(int m, int s) {
  if (std::abs(s) > m || ((m - s) % 2) != 0)
    throw BadSignature("signature must satisfy |s| <= m and s = m mod 2");
  MatX d = MatX::Zero(m, m);
  const int negatives = (m - s) / 2;
  for (int i = 0; i < m; ++i) d(i, i) = (i < negatives) ? -1.0 : 1.0;
  return d;
}

MatX tr_matrix(const MatX& q) {
  const int n = static_cast<int>(q.rows());
  const MatX j = jplus(n - 1);
  return j * q.transpose() * j;
}

MatX ad_matrix(const MatX& q) {
  const int n = static_cast<int>(q.rows());
  const MatX a = arnold_matrix(n - 1);
  return a.transpose() * q * a;
}

bool SpinCellRep::operator==(const SpinCellRep& other) const {
  if (!(cell == other.cell)) return false;
  const Quat &l1 = rep.left.q(), &l2 = other.rep.left.q();
  const Quat &r1 = rep.right.q(), &r2 = other.rep.right.q();
  return l1.a == l2.a && l1.b == l2.b && l1.c == l2.c && l1.d == l2.d && r1.a == r2.a &&
         r1.b == r2.b && r1.c == r2.c && r1.d == r2.d;
}

double snap_component(double x, double tol) {
  static const double grid[] = {0.0,        0.5,         -0.5,       M_SQRT1_2,
                                -M_SQRT1_2, 1.0,         -1.0};
  for (double g : grid)
    if (std::abs(x - g) <= tol) return g;
  throw InvalidInput("spin component does not snap to the octahedral grid");
}

SpinPair spin_snap(const SpinPair& z, double tol) {
  auto snap_quat = [&](const UnitQuat& u) {
    return UnitQuat(Quat{snap_component(u.a(), tol), snap_component(u.b(), tol),
                         snap_component(u.c(), tol), snap_component(u.d(), tol)},
                    1e-9);
  };
  return {snap_quat(z.left), snap_quat(z.right)};
}

namespace {

// Compensated double-double arithmetic. The blend path below runs through
// matrices whose condition number grows like the square of the eliminating
// multipliers, which for points reached by short flows exceeds 1/eps in plain
// double; two doubles of working precision keep every sample meaningful.
struct Dd {
  double hi = 0.0;
  double lo = 0.0;
};

Dd dd_two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Dd dd_fast_sum(double a, double b) {  // requires |a| >= |b| or a == 0
  const double s = a + b;
  return {s, b - (s - a)};
}

Dd dd_add(const Dd& a, const Dd& b) {
  Dd s = dd_two_sum(a.hi, b.hi);
  return dd_fast_sum(s.hi, s.lo + a.lo + b.lo);
}

Dd dd_neg(const Dd& a) { return {-a.hi, -a.lo}; }

Dd dd_sub(const Dd& a, const Dd& b) { return dd_add(a, dd_neg(b)); }

Dd dd_mul(const Dd& a, const Dd& b) {
  const double p = a.hi * b.hi;
  const double err = std::fma(a.hi, b.hi, -p);
  return dd_fast_sum(p, err + a.hi * b.lo + a.lo * b.hi);
}

Dd dd_div(const Dd& a, const Dd& b) {
  const double q1 = a.hi / b.hi;
  Dd r = dd_sub(a, dd_mul({q1, 0.0}, b));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul({q2, 0.0}, b));
  return dd_add(dd_two_sum(q1, q2), {r.hi / b.hi, 0.0});
}

Dd dd_sqrt(const Dd& a) {
  if (a.hi <= 0.0) return {std::sqrt(a.hi), 0.0};
  const double x = std::sqrt(a.hi);
  const Dd r = dd_sub(a, dd_mul({x, 0.0}, {x, 0.0}));
  return dd_fast_sum(x, r.hi / (2.0 * x));
}

using Dd4 = std::array<std::array<Dd, 4>, 4>;

// Row elimination of pi4(z) in double-double, recording the unit upper
// triangular transform u with u * q = cell * (upper, positive diagonal).
struct SpinElimination {
  SignedPermutation cell;
  Dd4 u;
};

SpinElimination dd_eliminate(const Dd4& q, double tol) {
  Dd4 m = q;
  Dd4 u{};
  for (int i = 0; i < 4; ++i) u[i][i] = {1.0, 0.0};
  std::array<bool, 4> assigned{};

  SignedPermutation p;
  p.size = 4;
  p.image.assign(4, -1);
  p.sign.assign(4, 0);

  for (int j = 0; j < 4; ++j) {
    int pivot = -1;
    for (int i = 3; i >= 0; --i) {
      if (!assigned[i] && std::abs(m[i][j].hi) > tol) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) throw DegeneratePivot(j, "no admissible pivot in column " + std::to_string(j + 1));

    const Dd pv = m[pivot][j];
    for (int i = 0; i < pivot; ++i) {
      const Dd mu = dd_div(m[i][j], pv);
      if (mu.hi == 0.0 && mu.lo == 0.0) continue;
      for (int k = 0; k < 4; ++k) {
        m[i][k] = dd_sub(m[i][k], dd_mul(mu, m[pivot][k]));
        u[i][k] = dd_sub(u[i][k], dd_mul(mu, u[pivot][k]));
      }
    }
    for (int j2 = j + 1; j2 < 4; ++j2) {
      const Dd mu = dd_div(m[pivot][j2], pv);
      if (mu.hi == 0.0 && mu.lo == 0.0) continue;
      for (int k = 0; k < 4; ++k) m[k][j2] = dd_sub(m[k][j2], dd_mul(mu, m[k][j]));
    }

    assigned[pivot] = true;
    p.image[j] = pivot;
    p.sign[j] = pv.hi > 0 ? 1 : -1;
  }

  return {std::move(p), u};
}

// Gram-Schmidt of a double-double matrix, projections applied twice per
// column, returned in double. Pivots are the column norms, hence positive.
Mat4 dd_frame(const Dd4& m) {
  Dd4 f = m;
  for (int j = 0; j < 4; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Dd r{};
        for (int i = 0; i < 4; ++i) r = dd_add(r, dd_mul(f[i][k], f[i][j]));
        for (int i = 0; i < 4; ++i) f[i][j] = dd_sub(f[i][j], dd_mul(r, f[i][k]));
      }
    }
    Dd n2{};
    for (int i = 0; i < 4; ++i) n2 = dd_add(n2, dd_mul(f[i][j], f[i][j]));
    const Dd n = dd_sqrt(n2);
    if (!(n.hi > 0.0)) throw SingularInput("pivot " + std::to_string(j + 1) + " below tolerance");
    for (int i = 0; i < 4; ++i) f[i][j] = dd_div(f[i][j], n);
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = f[i][j].hi;
  if (out.determinant() < 0.0) throw NegativeOrientation("matrix has negative determinant");
  return out;
}

double quat_dot(const UnitQuat& p, const UnitQuat& q) {
  return p.a() * q.a() + p.b() * q.b() + p.c() * q.c() + p.d() * q.d();
}

}  // namespace

namespace {

// Core of identify_cell_spin on a prepared matrix: anchor is a double spin
// pair with pi4(anchor) equal to q up to roundoff, the start of the lift.
SpinCellRep identify_cell_spin_dd(const Dd4& q, const SpinPair& anchor) {
  // A tighter pivot tolerance than the matrix interface default: the walk
  // below stays stable at any cell depth, so every pivot above roundoff is
  // usable, and points reached by short flows sit very close to cell walls.
  SpinElimination elim = dd_eliminate(q, 1e-13);

  // Frame of the straight path from z to the cell representative, inside the
  // cell: blend(s) = I + s (u - I), with blend(1) q = cell * upper.
  auto frame_at = [&](double s) {
    Dd4 b = q;  // blend(s) * q
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Dd acc = q[i][j];
        for (int k = i + 1; k < 4; ++k)
          acc = dd_add(acc, dd_mul(dd_mul({s, 0.0}, elim.u[i][k]), q[k][j]));
        b[i][j] = acc;
      }
    return dd_frame(b);
  };

  // Lift the path continuously from the anchor, bisecting wherever
  // consecutive frames are too far apart to transport the sheet.
  const double gate = 0.70710678118654752;
  SpinPair cur = anchor;
  double s_cur = 0.0;
  std::vector<double> agenda;
  for (int k = 1; k <= 32; ++k) agenda.push_back(1.0 - (k - 1) / 32.0);
  int evals = 0;
  while (!agenda.empty()) {
    const double s_next = agenda.back();
    if (++evals > 4000) throw NoStableCell("cell walk exceeded its refinement budget");
    SpinPair cand = pi4_inverse(frame_at(s_next));
    double align = std::min(quat_dot(cand.left, cur.left), quat_dot(cand.right, cur.right));
    if (align < 0.0) {
      cand = -cand;
      align = -align;
    }
    if (align <= gate) {
      const double mid = 0.5 * (s_cur + s_next);
      if (!(mid > s_cur && mid < s_next))
        throw NoStableCell("cell walk stalled between samples");
      agenda.push_back(mid);
      continue;
    }
    cur = cand;
    s_cur = s_next;
    agenda.pop_back();
  }
  return {spin_snap(cur), std::move(elim.cell)};
}

}  // namespace

SpinCellRep identify_cell_spin(const SpinPair& z) {
  Dd4 q;
  const Mat4 qm = pi4(z);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q[i][j] = {qm(i, j), 0.0};
  return identify_cell_spin_dd(q, z);
}

namespace {

const ImagQuat kFlowLeft{M_PI * std::sqrt(3.0) / 2.0, 0.0, M_PI / 2.0};
const ImagQuat kFlowRight{0.0, 0.0, M_PI / 2.0};

SpinPair flow_step(const SpinPair& z, double h) {
  return {z.left * quat_exp(h * kFlowLeft), z.right * quat_exp(h * kFlowRight)};
}

Dd4 dd_mat_mul(const Dd4& a, const Dd4& b) {
  Dd4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Dd acc{};
      for (int k = 0; k < 4; ++k) acc = dd_add(acc, dd_mul(a[i][k], b[k][j]));
      out[i][j] = acc;
    }
  return out;
}

Dd4 dd_exp(const Dd4& a) {
  Dd4 out{};
  Dd4 term{};
  for (int i = 0; i < 4; ++i) out[i][i] = term[i][i] = {1.0, 0.0};
  for (int k = 1; k <= 40; ++k) {
    term = dd_mat_mul(term, a);
    const Dd inv_k{1.0 / k, 0.0};
    double peak = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        term[i][j] = dd_mul(term[i][j], inv_k);
        out[i][j] = dd_add(out[i][j], term[i][j]);
        peak = std::max(peak, std::abs(term[i][j].hi));
      }
    if (peak < 1e-40) break;
  }
  return out;
}

// Grid components back to full working precision: the snapped doubles for
// +-1/sqrt2 are off the true value by half an ulp, which matters at flow
// depths where the cell signal drops below 1e-20.
Dd dd_refine_grid(double g) {
  if (g == M_SQRT1_2 || g == -M_SQRT1_2) {
    const Dd half_sqrt2 = dd_mul(dd_sqrt({2.0, 0.0}), {0.5, 0.0});
    return g > 0 ? half_sqrt2 : dd_neg(half_sqrt2);
  }
  return {g, 0.0};
}

using DdQuat = std::array<Dd, 4>;

DdQuat dd_quat_mul(const DdQuat& p, const DdQuat& q) {
  auto term = [](const Dd& x, const Dd& y) { return dd_mul(x, y); };
  DdQuat out;
  out[0] = dd_sub(dd_sub(dd_sub(term(p[0], q[0]), term(p[1], q[1])), term(p[2], q[2])),
                  term(p[3], q[3]));
  out[1] = dd_sub(dd_add(dd_add(term(p[0], q[1]), term(p[1], q[0])), term(p[2], q[3])),
                  term(p[3], q[2]));
  out[2] = dd_add(dd_add(dd_sub(term(p[0], q[2]), term(p[1], q[3])), term(p[2], q[0])),
                  term(p[3], q[1]));
  out[3] = dd_add(dd_sub(dd_add(term(p[0], q[3]), term(p[1], q[2])), term(p[2], q[1])),
                  term(p[3], q[0]));
  return out;
}

// pi4 of a snapped pair, columns z_l e_j conj(z_r), in working precision.
Dd4 dd_pi4_snapped(const SpinPair& z) {
  DdQuat zl, zr_conj;
  const Quat& l = z.left.q();
  const Quat& r = z.right.q();
  zl = {dd_refine_grid(l.a), dd_refine_grid(l.b), dd_refine_grid(l.c), dd_refine_grid(l.d)};
  zr_conj = {dd_refine_grid(r.a), dd_refine_grid(-r.b), dd_refine_grid(-r.c),
             dd_refine_grid(-r.d)};
  Dd4 out{};
  for (int j = 0; j < 4; ++j) {
    DdQuat e{};
    e[j] = {1.0, 0.0};
    const DdQuat col = dd_quat_mul(dd_quat_mul(zl, e), zr_conj);
    for (int i = 0; i < 4; ++i) out[i][j] = col[i];
  }
  return out;
}

// Chop of a pair sitting exactly on the snap grid. The flowed matrix
// P0 exp(s h L) is formed in working precision from the grid values, so the
// classification stays meaningful far below the double noise floor: the spin
// walk runs at h and h/2, and the cell alone (elimination pivots scale like
// h^3, well above the working-precision noise) is checked down to 1e-8.
SpinCellRep chop_spin_exact(const SpinPair& z, double direction) {
  const Dd4 p0 = dd_pi4_snapped(z);
  const Mat4 l_mat = dpi4(kFlowLeft, kFlowRight);
  Dd4 l_dd{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) l_dd[i][j] = {l_mat(i, j), 0.0};

  auto flowed = [&](double h) {
    Dd4 step = l_dd;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) step[i][j] = dd_mul(step[i][j], {direction * h, 0.0});
    return dd_mat_mul(p0, dd_exp(step));
  };

  const double h0 = 1e-3;
  SpinCellRep coarse = identify_cell_spin_dd(flowed(h0), flow_step(z, direction * h0));
  SpinCellRep fine =
      identify_cell_spin_dd(flowed(h0 / 2), flow_step(z, direction * h0 / 2));
  if (!(fine == coarse))
    throw NoStableCell("cell classification failed to stabilize along the flow");

  for (double h = h0 / 4; h >= 1e-8; h /= 2) {
    const double tol = std::max(1e-2 * h * h * h, 1e-28);
    if (!(dd_eliminate(flowed(h), tol).cell == fine.cell))
      throw NoStableCell("cell classification failed to stabilize along the flow");
  }
  return fine;
}

SpinCellRep chop_spin_impl(const SpinPair& z, double direction) {
  bool on_grid = true;
  SpinPair base = z;
  try {
    base = spin_snap(z);
  } catch (const InvalidInput&) {
    on_grid = false;
  }
  if (on_grid) return chop_spin_exact(base, direction);

  double h = 1e-3;
  SpinCellRep coarse = identify_cell_spin(flow_step(z, direction * h));
  while (h >= 1e-8) {
    h /= 2.0;
    SpinCellRep fine = identify_cell_spin(flow_step(z, direction * h));
    if (fine == coarse) return fine;
    coarse = fine;
  }
  throw NoStableCell("cell classification failed to stabilize along the flow");
}

}  // namespace

SpinCellRep chop_minus_spin(const SpinPair& z) { return chop_spin_impl(z, -1.0); }
SpinCellRep chop_plus_spin(const SpinPair& z) { return chop_spin_impl(z, 1.0); }

std::optional<std::size_t> find_convex_entry(const SpinPair& z) {
  const SpinCellRep rep = identify_cell_spin(z);
  const auto& table = convex_table();
  for (std::size_t k = 0; k < table.size(); ++k) {
    SpinCellRep entry{table[k].spin, table[k].cell};
    if (entry == rep) return k;
  }
  return std::nullopt;
}

bool is_convex_spin(const SpinPair& z) { return find_convex_entry(z).has_value(); }

bool is_stably_convex_spin(const SpinPair& z) {
  const SpinCellRep rep = identify_cell_spin(z);
  const SpinPair top{-UnitQuat(), UnitQuat(Quat{0, 0, 0, 1})};
  SpinCellRep entry{top, identify_cell(pi4(top)).cell};
  return rep == entry;
}

}  // namespace locconvex
