#pragma once

// Pole-residue form of M in the complex plane.
//
//   M(w) = N0 + sum_n [ (lambda_n/(w - lambda_n) + 1) A_n - p_n(w) ],
//   p_n(w) = -(w/lambda_n + ... + (w/lambda_n)^nv_n) A_n,
//
// with w = i nu on the physical axis, or w = -s mu0 sigma alpha^2 in the
// Laplace variable s. Poles in s sit at s_n = -lambda_n / (mu0 sigma alpha^2).

#include <complex>
#include <cstddef>
#include <vector>

#include "mpt/spectral_model.hpp"

namespace mpt {

struct PoleResidueExpansion {
  SymTensor3 n0;
  std::vector<double> lambdas;
  std::vector<double> poles_s;  // 1/s, strictly decreasing, all < 0
  std::vector<SymTensor3> residues;
  std::vector<int> nv;
  double alpha = 0.0;
  double sigma_star = 0.0;

  std::size_t size() const noexcept { return lambdas.size(); }
  double time_scale() const noexcept { return kMu0 * sigma_star * alpha * alpha; }
};

/// nv = 0 for every mode; call select_truncation / apply_truncation for more.
/// Dark modes carry no residue and are dropped.
PoleResidueExpansion from_model(const SpectralModel& model);

/// Smallest nv >= 0 with 2^nv >= M_n 2^(index+1).
int select_truncation(const PoleResidueExpansion& expansion, std::size_t index);
void apply_truncation(PoleResidueExpansion& expansion);

enum class Variable { W, S };

struct ComplexTensorEval {
  std::array<std::complex<double>, 6> packed{};

  std::complex<double> operator()(int i, int j) const noexcept { return packed[SymTensor3::slot(i, j)]; }
  ComplexSymTensor3 split() const;
  double frobenius() const noexcept;
};

struct Evaluation {
  ComplexTensorEval value;
  /// Frobenius norm of N0 plus the first k+1 mode terms, k = 0..size-1.
  std::vector<double> partial_norms;
};

/// Throws PoleProximity within 1e-12 |pole| of any pole.
Evaluation evaluate(const PoleResidueExpansion& expansion, std::complex<double> point, Variable variable);

/// s_n A_n
SymTensor3 residue_at_pole(const PoleResidueExpansion& expansion, std::size_t index);

/// Trapezoid average of (s - s_n) M(s) over `points` nodes on a circle of
/// radius rel_radius |s_n| about s_n.
ComplexTensorEval contour_residue(const PoleResidueExpansion& expansion, std::size_t index, int points = 8,
                                  double rel_radius = 1e-6);

}  // namespace mpt
