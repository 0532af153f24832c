#include "mpt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpt {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidRotation: return "invalid rotation";
    case ErrorKind::InvalidMode: return "invalid mode";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::IndexOutOfRange: return "index out of range";
    case ErrorKind::NoDominantMode: return "no dominant mode";
    case ErrorKind::PoleProximity: return "pole proximity";
    case ErrorKind::NumericRange: return "numeric range";
    case ErrorKind::RootBracket: return "root bracket failure";
    case ErrorKind::ResidueSpacing: return "residue spacing";
    case ErrorKind::NoFit: return "no fit";
    case ErrorKind::Convergence: return "convergence failure";
    case ErrorKind::Schema: return "schema mismatch";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

SymTensor3 SymTensor3::diagonal(double d1, double d2, double d3) {
  return SymTensor3({d1, d2, d3, 0.0, 0.0, 0.0});
}

SymTensor3 SymTensor3::from_matrix(const Mat3& m) {
  return SymTensor3({m[0][0], m[1][1], m[2][2], 0.5 * (m[0][1] + m[1][0]),
                     0.5 * (m[0][2] + m[2][0]), 0.5 * (m[1][2] + m[2][1])});
}

SymTensor3 SymTensor3::outer(const Vec3& a, const Vec3& b) {
  SymTensor3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) t.at(i, j) = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  return t;
}

Mat3 SymTensor3::matrix() const noexcept {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
  return m;
}

double SymTensor3::frobenius() const noexcept {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += v_[k] * v_[k];
  for (int k = 3; k < 6; ++k) s += 2.0 * v_[k] * v_[k];
  return std::sqrt(s);
}

double SymTensor3::max_abs() const noexcept {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool SymTensor3::finite() const noexcept {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) noexcept {
  for (int k = 0; k < 6; ++k) v_[k] += o.v_[k];
  return *this;
}

SymTensor3& SymTensor3::operator-=(const SymTensor3& o) noexcept {
  for (int k = 0; k < 6; ++k) v_[k] -= o.v_[k];
  return *this;
}

SymTensor3& SymTensor3::operator*=(double s) noexcept {
  for (double& x : v_) x *= s;
  return *this;
}

double ComplexSymTensor3::frobenius() const noexcept {
  return std::hypot(real.frobenius(), imag.frobenius());
}

Mat3 matmul(const Mat3& a, const Mat3& b) noexcept {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat3 transpose(const Mat3& a) noexcept {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

Vec3 matvec(const SymTensor3& t, const Vec3& x) noexcept {
  Vec3 y{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y[i] += t(i, j) * x[j];
  return y;
}

namespace {

constexpr Mat3 kIdentity{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
constexpr double kOrthoTol = 1e-12;

double det3(const Mat3& q) noexcept {
  return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) -
         q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
         q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
}

}  // namespace

Rotation3::Rotation3() noexcept : q_(kIdentity) {}

Rotation3::Rotation3(const Mat3& q) : q_(q) {
  for (const auto& row : q)
    for (double x : row)
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidRotation, "non-finite entry");
  const Mat3 qtq = matmul(transpose(q), q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(qtq[i][j] - kIdentity[i][j]) > kOrthoTol)
        throw Error(ErrorKind::InvalidRotation, "Q^T Q deviates from identity");
  if (std::abs(std::abs(det3(q)) - 1.0) > kOrthoTol)
    throw Error(ErrorKind::InvalidRotation, "|det Q| deviates from 1");
}

Rotation3 Rotation3::about_axis(const Vec3& axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(angle))
    throw Error(ErrorKind::InvalidRotation, "axis must be a finite non-zero vector");
  const double x = axis[0] / n, y = axis[1] / n, z = axis[2] / n;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  // Rodrigues
  Mat3 q{{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
          {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
          {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
  return Rotation3(q);
}

double Rotation3::det() const noexcept { return det3(q_); }

Vec3 Rotation3::apply(const Vec3& x) const noexcept {
  Vec3 y{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y[i] += q_[i][j] * x[j];
  return y;
}

SymEigen eigen_sym3(const SymTensor3& t) {
  if (!t.finite()) throw Error(ErrorKind::InvalidInput, "eigen_sym3: non-finite tensor");

  Mat3 a = t.matrix();
  Mat3 v = kIdentity;
  const double scale = t.frobenius();
  const double stop = 1e-14 * scale;

  auto max_off = [&a] {
    return std::max({std::abs(a[0][1]), std::abs(a[0][2]), std::abs(a[1][2])});
  };

  for (int sweep = 0; sweep < 64 && max_off() > stop; ++sweep) {
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double tan_r = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tan_r * tan_r + 1.0);
        const double s = tan_r * c;
        // A <- J^T A J with J the (p,q) Givens rotation
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (max_off() > stop * 16.0) throw Error(ErrorKind::Convergence, "eigen_sym3: Jacobi sweeps did not converge");

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&a](int i, int j) { return a[i][i] < a[j][j]; });

  SymEigen out{{a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]}, Rotation3{}};
  Mat3 sorted{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) sorted[r][c] = v[r][order[c]];
  out.vectors = Rotation3(sorted);
  return out;
}

SymTensor3 rotate_tensor(const SymTensor3& t, const Rotation3& q) {
  const Mat3 r = matmul(matmul(q.matrix(), t.matrix()), transpose(q.matrix()));
  return SymTensor3::from_matrix(r);
}

SymTensor3 dipole_green_hessian(const Vec3& x, const Vec3& z) {
  const Vec3 r{x[0] - z[0], x[1] - z[1], x[2] - z[2]};
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (!(len > 0.0)) throw Error(ErrorKind::Singularity, "dipole_green_hessian: x == z");
  const double pre = 1.0 / (4.0 * kPi * len * len * len);
  const Vec3 u{r[0] / len, r[1] / len, r[2] / len};
  SymTensor3 h;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) h.at(i, j) = pre * (3.0 * u[i] * u[j] - (i == j ? 1.0 : 0.0));
  return h;
}

CVec3 perturbed_field(const Vec3& x, const Vec3& z, const ComplexSymTensor3& m, const Vec3& h0_at_z) {
  const SymTensor3 g = dipole_green_hessian(x, z);
  const Vec3 mh_re = matvec(m.real, h0_at_z);
  const Vec3 mh_im = matvec(m.imag, h0_at_z);
  const Vec3 re = matvec(g, mh_re);
  const Vec3 im = matvec(g, mh_im);
  return {std::complex<double>(re[0], im[0]), std::complex<double>(re[1], im[1]),
          std::complex<double>(re[2], im[2])};
}

OffDiagBoundReport offdiag_bound_report(const SymTensor3& r, const SymTensor3& i) {
  OffDiagBoundReport rep;
  const double tr_r = std::abs(r.trace());
  const double tr_i = i.trace();
  rep.margin_r = tr_r - std::max({std::abs(r(0, 1)), std::abs(r(0, 2)), std::abs(r(1, 2))});
  rep.margin_i = tr_i - std::max({std::abs(i(0, 1)), std::abs(i(0, 2)), std::abs(i(1, 2))});
  rep.pass_r = rep.margin_r >= 0.0;
  rep.pass_i = rep.margin_i >= 0.0;
  return rep;
}

}  // namespace mpt
