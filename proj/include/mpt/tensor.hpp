#pragma once

// Real- and complex-symmetric 3x3 tensor algebra and the dipole field of a
// small inclusion. Tensors carry m^3 unless noted; fields carry A/m. Units
// are documented, not enforced.

#include <array>
#include <complex>

#include "mpt/error.hpp"

namespace mpt {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<std::complex<double>, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr double kPi = 3.14159265358979323846;

/// Real symmetric 3x3 tensor holding the six independent entries in the order
/// 11, 22, 33, 12, 13, 23.
class SymTensor3 {
 public:
  constexpr SymTensor3() = default;
  constexpr explicit SymTensor3(const std::array<double, 6>& packed) : v_(packed) {}

  static SymTensor3 diagonal(double d1, double d2, double d3);
  static SymTensor3 identity(double scale = 1.0) { return diagonal(scale, scale, scale); }
  /// Symmetric part (M + M^T)/2 of a full matrix.
  static SymTensor3 from_matrix(const Mat3& m);
  /// a (x) b + b (x) a, halved: the symmetric outer product.
  static SymTensor3 outer(const Vec3& a, const Vec3& b);

  double operator()(int i, int j) const noexcept { return v_[slot(i, j)]; }
  double& at(int i, int j) noexcept { return v_[slot(i, j)]; }

  const std::array<double, 6>& packed() const noexcept { return v_; }
  Mat3 matrix() const noexcept;

  double trace() const noexcept { return v_[0] + v_[1] + v_[2]; }
  double frobenius() const noexcept;
  double max_abs() const noexcept;
  bool finite() const noexcept;

  SymTensor3& operator+=(const SymTensor3& o) noexcept;
  SymTensor3& operator-=(const SymTensor3& o) noexcept;
  SymTensor3& operator*=(double s) noexcept;

  friend SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) noexcept { return a += b; }
  friend SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) noexcept { return a -= b; }
  friend SymTensor3 operator*(double s, SymTensor3 a) noexcept { return a *= s; }
  friend SymTensor3 operator*(SymTensor3 a, double s) noexcept { return a *= s; }
  friend SymTensor3 operator-(SymTensor3 a) noexcept { return a *= -1.0; }
  friend bool operator==(const SymTensor3&, const SymTensor3&) = default;

  static constexpr int slot(int i, int j) noexcept {
    if (i == j) return i;
    const int lo = i < j ? i : j;
    const int hi = i < j ? j : i;
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }

 private:
  std::array<double, 6> v_{};
};

/// Complex symmetric tensor M = real + i imag.
struct ComplexSymTensor3 {
  SymTensor3 real;
  SymTensor3 imag;

  std::complex<double> operator()(int i, int j) const noexcept { return {real(i, j), imag(i, j)}; }
  double frobenius() const noexcept;
  ComplexSymTensor3 conj() const noexcept { return {real, -imag}; }
};

/// Orthogonal matrix; the constructor rejects anything with |Q^T Q - I| or
/// ||det Q| - 1| above 1e-12.
class Rotation3 {
 public:
  Rotation3() noexcept;
  explicit Rotation3(const Mat3& q);

  static Rotation3 about_axis(const Vec3& axis, double angle);

  const Mat3& matrix() const noexcept { return q_; }
  double operator()(int i, int j) const noexcept { return q_[i][j]; }
  double det() const noexcept;
  Vec3 column(int j) const noexcept { return {q_[0][j], q_[1][j], q_[2][j]}; }
  Vec3 apply(const Vec3& x) const noexcept;

 private:
  Mat3 q_;
};

struct SymEigen {
  std::array<double, 3> values;  // ascending
  Rotation3 vectors;             // columns are eigenvectors
};

/// Cyclic Jacobi diagonalisation, T = Q diag(values) Q^T.
SymEigen eigen_sym3(const SymTensor3& t);

/// result_ij = Q_ip Q_jq T_pq
SymTensor3 rotate_tensor(const SymTensor3& t, const Rotation3& q);

/// Hessian of G(x,z) = 1/(4 pi |x - z|), units m^-3.
SymTensor3 dipole_green_hessian(const Vec3& x, const Vec3& z);

/// (H_alpha - H_0)(x) = D^2 G(x,z) M H_0(z)
CVec3 perturbed_field(const Vec3& x, const Vec3& z, const ComplexSymTensor3& m, const Vec3& h0_at_z);

struct OffDiagBoundReport {
  bool pass_r = true;
  bool pass_i = true;
  /// Smallest |Tr R| - |R_ij| and Tr I - |I_ij| over i != j; negative on violation.
  double margin_r = 0.0;
  double margin_i = 0.0;
};

OffDiagBoundReport offdiag_bound_report(const SymTensor3& r, const SymTensor3& i);

Mat3 matmul(const Mat3& a, const Mat3& b) noexcept;
Mat3 transpose(const Mat3& a) noexcept;
Vec3 matvec(const SymTensor3& t, const Vec3& x) noexcept;

}  // namespace mpt
