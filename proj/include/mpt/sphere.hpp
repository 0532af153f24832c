#pragma once

// Homogeneous conducting permeable sphere: M(omega) = m(omega) I.
//
// With x^2 = (k alpha)^2 = i mu_r nu and g(x) = x j0(x)/j1(x),
//   rho = (g(x) - 1)/mu_r,   m = 2 pi alpha^3 (2 - rho)/(1 + rho).
// In the variable w = i nu the poles are w = x^2/mu_r at the positive real
// roots of x^2 sin x - (1 - mu_r)(sin x - x cos x).

#include <complex>
#include <cstddef>
#include <vector>

#include "mpt/spectral_model.hpp"

namespace mpt {

struct SphereSpec {
  double alpha = 0.01;
  double mu_r = 1.5;
  double sigma_star = 5.96e6;

  void validate() const;
  double time_scale() const noexcept { return kMu0 * sigma_star * alpha * alpha; }
};

/// 4 pi alpha^3 (mu_r - 1)/(mu_r + 2)
double sphere_static(const SphereSpec& spec);

std::complex<double> mpt_sphere(const SphereSpec& spec, double omega);

/// m as a function of x = k alpha; even in x.
std::complex<double> sphere_m_from_x(const SphereSpec& spec, std::complex<double> x);

/// m continued to complex w (w = i nu on the physical axis).
std::complex<double> sphere_m_w(const SphereSpec& spec, std::complex<double> w);

/// Left-hand side of the characteristic equation at real x.
double sphere_characteristic(double x, double mu_r);

std::vector<double> sphere_poles(const SphereSpec& spec, std::size_t count);

SpectralModel sphere_spectral_model(const SphereSpec& spec, std::size_t n_modes);

}  // namespace mpt
