#pragma once

// An object's spectral signature and the assembly of R(nu), I(nu), M(nu)
// from it. Internally every frequency is the dimensionless
// nu = omega * sigma_star * mu0 * alpha^2.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpt/tensor.hpp"

namespace mpt {

constexpr double kMu0 = 4.0e-7 * kPi;  // H/m

/// One eigenvalue of the curl-curl transmission eigenproblem together with
/// the couplings c_{k,i} = <phi_{n,k}, Theta0(e_i)> of each eigenfunction in
/// its eigenspace. `couplings.size()` is the multiplicity.
struct Mode {
  double lambda = 0.0;
  std::vector<Vec3> couplings;
  bool dark = false;

  std::size_t multiplicity() const noexcept { return couplings.size(); }
};

enum class Provenance { SphereAnalytic, Surrogate, External, Manual };

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(const std::string& s);

class SpectralModel {
 public:
  /// Validates: alpha, sigma_star > 0; every mode has lambda > 0, finite
  /// couplings, at least one row and a non-zero row unless marked dark;
  /// lambdas strictly increasing.
  SpectralModel(double alpha, double sigma_star, SymTensor3 n0, std::vector<Mode> modes,
                Provenance provenance = Provenance::Manual, std::optional<std::string> topology = std::nullopt,
                std::optional<double> tail_bound = std::nullopt);

  double alpha() const noexcept { return alpha_; }
  double sigma_star() const noexcept { return sigma_star_; }
  const SymTensor3& n0() const noexcept { return n0_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  Provenance provenance() const noexcept { return provenance_; }
  const std::optional<std::string>& topology() const noexcept { return topology_; }
  const std::optional<double>& tail_bound() const noexcept { return tail_bound_; }

  /// mu0 sigma_star alpha^2, so that nu = omega * time_scale().
  double time_scale() const noexcept { return kMu0 * sigma_star_ * alpha_ * alpha_; }
  double nu_from_omega(double omega) const noexcept { return omega * time_scale(); }
  double omega_from_nu(double nu) const noexcept { return nu / time_scale(); }
  double nu_from_hz(double f) const noexcept { return nu_from_omega(2.0 * kPi * f); }

 private:
  double alpha_;
  double sigma_star_;
  SymTensor3 n0_;
  std::vector<Mode> modes_;
  Provenance provenance_;
  std::optional<std::string> topology_;
  std::optional<double> tail_bound_;
};

/// Groups an eigenvalue list (ascending) with one coupling row per
/// eigenfunction into Modes, merging neighbours whose relative gap is below
/// `rel_gap`. Merged modes take the mean eigenvalue. Rows that are all zero
/// produce dark modes.
std::vector<Mode> merge_eigenpairs(std::span<const double> lambdas, std::span<const Vec3> couplings,
                                   double rel_gap = 1e-8);

struct FrequencyGrid {
  enum class Kind { Nu, Omega };
  std::vector<double> values;
  Kind kind = Kind::Nu;

  /// Checks strictly increasing, non-negative, finite.
  void validate() const;
  std::vector<double> to_nu(const SpectralModel& model) const;

  static FrequencyGrid linear(double lo, double hi, std::size_t n, Kind kind = Kind::Nu);
  static FrequencyGrid logarithmic(double lo, double hi, std::size_t n, Kind kind = Kind::Nu);
};

/// beta(nu, lambda) = -i nu / (i nu - lambda)
std::complex<double> beta(double nu, double lambda);

struct BetaLogDerivatives {
  double d_re = 0.0;   // dRe(beta)/dlog nu
  double d2_re = 0.0;  // d^2 Re(beta)/d(log nu)^2
  double d_im = 0.0;   // dIm(beta)/dlog nu
};

BetaLogDerivatives beta_dlog(double nu, double lambda);

/// A^(n) = -(alpha^3 lambda_n / 4) C^T C
SymTensor3 mode_tensor(const SpectralModel& model, std::size_t n);

struct Assembly {
  SymTensor3 r;
  SymTensor3 i;
  ComplexSymTensor3 m;
};

Assembly assemble(const SpectralModel& model, double nu);

struct AssemblyLogDerivatives {
  SymTensor3 d_r;
  SymTensor3 d2_r;
  SymTensor3 d_i;
};

AssemblyLogDerivatives assemble_dlog(const SpectralModel& model, double nu);

struct LimitTensors {
  SymTensor3 m0;
  SymTensor3 m_inf;
};

LimitTensors limit_tensors(const SpectralModel& model);

/// Mode whose Im-part bump max_{nu <= nu_max} |Im beta_n| |A^(n)_ij| is
/// largest; ties go to the smaller lambda.
std::size_t dominant_mode(const SpectralModel& model, int i, int j, double nu_max);

enum class CommutatorKind { RI, RR, II };

/// RI: R(nu1) I(nu1) - I(nu1) R(nu1); RR and II use nu1 and nu2.
Mat3 commutator_z(const SpectralModel& model, double nu1, double nu2, CommutatorKind kind);

CommutatorKind commutator_kind_from_string(const std::string& s);

/// Copy of `model` with every coupling row c replaced by Q c and N0 by
/// Q N0 Q^T: the spectral signature of the rotated object.
SpectralModel rotate_model(const SpectralModel& model, const Rotation3& q);

/// Model keeping only mode `n`.
SpectralModel single_mode_model(const SpectralModel& model, std::size_t n);

}  // namespace mpt
