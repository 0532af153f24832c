#pragma once

// Single-mode rational fits of sweep data:
//   f_R(nu; a, b) = -a b nu^2 / (nu^2 + b^2)
//   f_I(nu; c, d) =  c d nu   / (nu^2 + d^2)
// Levenberg-Marquardt with Marquardt scaling, multi-started over a decade
// grid of b.

#include <vector>

#include "mpt/spectral_model.hpp"
#include "mpt/sweep.hpp"

namespace mpt {

enum class FitKind { R, I };

struct SweepData {
  std::vector<double> nu;
  std::vector<double> values;
};

struct FitResult {
  double amplitude = 0.0;  // a or c
  double eigen = 0.0;      // b or d, > 0
  double rms = 0.0;
  /// -|R - f_R| for kind R, |I - f_I| for kind I.
  std::vector<double> residuals;
  bool converged = false;
  int iterations = 0;
};

double fit_model(FitKind kind, double amplitude, double eigen, double nu) noexcept;

FitResult fit_dominant(const SweepData& data, FitKind kind);

/// |b - d| <= 0.15 max(b, d)
bool eigen_estimates_agree(double b, double d) noexcept;

struct CoefficientFit {
  int i = 0;
  int j = 0;
  bool skipped = false;  // identically zero coefficient
  FitResult r;
  FitResult im;
};

struct FitTable {
  std::vector<double> nu;
  std::vector<CoefficientFit> rows;  // 11, 22, 33, 12, 13, 23
};

/// Fits all six coefficients using the sweep points with nu <= nu_max.
FitTable fit_report(const std::vector<double>& nu, const std::vector<Assembly>& sweep_values, double nu_max,
                    Execution exec = Execution::Parallel);

}  // namespace mpt
