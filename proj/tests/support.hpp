#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mpt/spectral_model.hpp"

namespace testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double rel(const mpt::SymTensor3& a, const mpt::SymTensor3& b) {
  return (a - b).frobenius() / std::max(b.frobenius(), 1e-300);
}

inline mpt::SymTensor3 random_sym(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::array<double, 6> v{};
  for (double& x : v) x = u(rng);
  return mpt::SymTensor3(v);
}

inline mpt::Rotation3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * mpt::kPi);
  return mpt::Rotation3::about_axis({u(rng), u(rng), u(rng) + 2.0}, ang(rng));
}

/// Random model: increasing log-spread lambdas, multiplicities 1..3, random
/// couplings, alpha = 0.01, sigma = 5.96e6.
inline mpt::SpectralModel random_model(std::mt19937_64& rng, int n_modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> step(0.3, 1.5);
  std::uniform_int_distribution<int> mult(1, 3);
  std::vector<mpt::Mode> modes;
  double log_lambda = std::log(2.0) + step(rng);
  for (int n = 0; n < n_modes; ++n) {
    mpt::Mode m;
    m.lambda = std::exp(log_lambda);
    const int k = mult(rng);
    for (int r = 0; r < k; ++r) m.couplings.push_back({u(rng), u(rng), u(rng)});
    modes.push_back(m);
    log_lambda += step(rng);
  }
  const double a3 = 1e-6;
  return mpt::SpectralModel(0.01, 5.96e6, mpt::SymTensor3::diagonal(0.3 * a3, 0.5 * a3, 0.2 * a3), modes);
}

/// Two-mode model with non-commuting mode tensors.
inline mpt::SpectralModel two_mode_model() {
  std::vector<mpt::Mode> modes(2);
  modes[0].lambda = 9.0;
  modes[0].couplings = {{1.0, 0.2, 0.0}, {0.0, 0.6, 0.1}};
  modes[1].lambda = 31.0;
  modes[1].couplings = {{0.1, -0.3, 0.8}};
  return mpt::SpectralModel(0.01, 5.96e6, mpt::SymTensor3::diagonal(1.2e-6, 0.8e-6, 1.0e-6), modes);
}

}  // namespace testing
