#pragma once

// Finite-dimensional surrogate: a symmetric positive definite K standing in
// for the curl-curl operator and three source vectors theta0_i. Every
// frequency identity can be checked here by direct complex solves.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpt/spectral_model.hpp"
#include "mpt/sweep.hpp"

namespace mpt {

enum class SpectrumShape { Linear, Quadratic, Clustered };

const char* to_string(SpectrumShape s) noexcept;
SpectrumShape spectrum_shape_from_string(const std::string& s);

struct SurrogateProblem {
  int dim = 0;
  Eigen::MatrixXd k;
  std::array<Eigen::VectorXd, 3> theta0;
  double alpha = 0.01;
  double sigma_star = 5.96e6;
  std::uint64_t seed = 0;
  SpectrumShape shape = SpectrumShape::Linear;
  std::vector<double> spectrum;  // prescribed eigenvalues, ascending
};

/// K = Q diag(spectrum) Q^T with Q Haar-random from `seed`; theta0 are unit
/// Gaussian vectors. Linear: lambda_n = n. Quadratic: n^2. Clustered: pairs
/// (p^2, p^2 (1 + 1e-12)).
SurrogateProblem generate(int dim, std::uint64_t seed, SpectrumShape shape);

/// Solves (K - i nu I) theta1_i = i nu theta0_i; zero at nu = 0.
std::array<Eigen::VectorXcd, 3> direct_theta1(const SurrogateProblem& p, double nu);

struct SurrogateSpectrum {
  Eigen::VectorXd values;     // positive eigenvalues, ascending
  Eigen::MatrixXd vectors;    // dim x count
  Eigen::MatrixXd couplings;  // count x 3, c_{n,i} = phi_n . theta0_i
};

SurrogateSpectrum decompose(const SurrogateProblem& p);

/// Packs a spectrum into a model, merging near-equal eigenvalues.
SpectralModel spectrum_model(const SurrogateProblem& p, const SurrogateSpectrum& s, const SymTensor3& n0 = {});
SpectralModel eigen_model(const SurrogateProblem& p, const SymTensor3& n0 = {});

/// sum_n beta_n c_{n,i} phi_n
std::array<Eigen::VectorXcd, 3> series_theta1(const SurrogateSpectrum& s, double nu);

struct EnergyTensors {
  SymTensor3 r;
  SymTensor3 i;
};

/// Curl-energy forms from direct solves. nu > 0.
EnergyTensors energy_tensors_direct(const SurrogateProblem& p, double nu);
EnergyTensors energy_tensors(const SurrogateProblem& p, const std::array<Eigen::VectorXcd, 3>& theta1, double nu);

/// Forms linear in theta1, tested against theta0. Full (unsymmetrised) 3x3.
/// The I form uses Re(theta1 + theta0), with theta1 + theta0 from its own
/// shifted solve.
struct AlternativeForms {
  Mat3 r{};
  Mat3 i{};
};

AlternativeForms alternative_forms(const SurrogateProblem& p, const std::array<Eigen::VectorXcd, 3>& theta1,
                                   double nu);

/// Copy of the problem with theta0_i replaced by sum_j Q_ij theta0_j.
SurrogateProblem rotate_sources(const SurrogateProblem& p, const Rotation3& q);

/// 40 log-spaced nu over [1e-3 lambda_1, 1e3 lambda_max].
std::vector<double> default_oracle_grid(const SurrogateProblem& p);

struct IdentityResult {
  std::string name;
  double max_violation = 0.0;
  bool passed = true;
};

struct OracleReport {
  std::vector<IdentityResult> items;
  int dim = 0;
  std::uint64_t seed = 0;
  SpectrumShape shape = SpectrumShape::Linear;
  std::size_t grid_points = 0;

  bool all_passed() const noexcept;
};

/// Runs the identity battery. `spectrum` overrides the eigendecomposition used
/// for the series and the model (for fault injection).
OracleReport verify_identities(const SurrogateProblem& p, const std::vector<double>& nu_grid, double tol,
                               Execution exec = Execution::Parallel,
                               const std::optional<SurrogateSpectrum>& spectrum = std::nullopt);

}  // namespace mpt
