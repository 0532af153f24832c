#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_roots.h>

#include <cmath>
#include <complex>

#include "mpt/sphere.hpp"
#include "support.hpp"

using namespace mpt;
using cd = std::complex<double>;

namespace {

// Radial shooting: psi'' + 2 psi'/r - 2 psi/r^2 + x^2 psi = 0 on r in (0, 1]
// (r in units of alpha), regular branch psi ~ r. Outside the field is a
// uniform part plus a dipole; matching B_r and H_theta gives
//   Q = (psi + psi')/(mu_r psi),  m = 2 pi alpha^3 (2 - Q)/(1 + Q).
cd m_by_shooting(const SphereSpec& spec, double nu) {
  const cd x2 = cd(0.0, spec.mu_r * nu);
  const double r0 = 1e-3;
  const int steps = std::max(4000, static_cast<int>(200.0 * std::sqrt(std::abs(x2))));
  const double h = (1.0 - r0) / steps;
  auto rhs = [&](double r, cd p, cd dp) { return -2.0 * dp / r + 2.0 * p / (r * r) - x2 * p; };
  cd p = r0 * (1.0 - x2 * r0 * r0 / 10.0);
  cd dp = 1.0 - 3.0 * x2 * r0 * r0 / 10.0;
  double r = r0;
  for (int k = 0; k < steps; ++k) {
    const cd k1p = dp, k1d = rhs(r, p, dp);
    const cd k2p = dp + 0.5 * h * k1d, k2d = rhs(r + 0.5 * h, p + 0.5 * h * k1p, dp + 0.5 * h * k1d);
    const cd k3p = dp + 0.5 * h * k2d, k3d = rhs(r + 0.5 * h, p + 0.5 * h * k2p, dp + 0.5 * h * k2d);
    const cd k4p = dp + h * k3d, k4d = rhs(r + h, p + h * k3p, dp + h * k3d);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dp += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    r += h;
  }
  const cd q = (p + dp) / (spec.mu_r * p);
  const double a3 = spec.alpha * spec.alpha * spec.alpha;
  return 2.0 * kPi * a3 * (2.0 - q) / (1.0 + q);
}

// Brent on sin-free scaled characteristic function, brackets from a fine scan
std::vector<double> brent_poles(double mu_r, std::size_t count) {
  gsl_set_error_handler_off();
  gsl_root_fsolver* s = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
  gsl_function f;
  f.function = [](double x, void* p) { return sphere_characteristic(x, *static_cast<double*>(p)); };
  f.params = &mu_r;
  std::vector<double> out;
  const double dx = 1e-3;
  for (double a = 1e-2; out.size() < count; a += dx) {
    const double b = a + dx;
    if (sphere_characteristic(a, mu_r) * sphere_characteristic(b, mu_r) > 0.0) continue;
    gsl_root_fsolver_set(s, &f, a, b);
    double lo = a, hi = b;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      gsl_root_fsolver_iterate(s);
      lo = gsl_root_fsolver_x_lower(s);
      hi = gsl_root_fsolver_x_upper(s);
    }
    const double x = gsl_root_fsolver_root(s);
    out.push_back(x * x / mu_r);
  }
  gsl_root_fsolver_free(s);
  return out;
}

const SphereSpec kDesk{};

}  // namespace

TEST_CASE("static and perfect-conductor limits") {
  CHECK(sphere_static(kDesk) == doctest::Approx(1.7952e-6).epsilon(1e-4));
  CHECK(mpt_sphere(kDesk, 0.0).real() == doctest::Approx(4.0 * kPi * 1e-6 * 0.5 / 3.5).epsilon(1e-15));
  CHECK(mpt_sphere(kDesk, 0.0).imag() == 0.0);
  const cd pec = mpt_sphere(kDesk, 2.0 * kPi * 1e12);
  CHECK(pec.real() == doctest::Approx(-6.2832e-6).epsilon(1e-3));
  CHECK(std::abs(pec.imag()) < 1e-3 * 6.2832e-6);
  CHECK(mpt_sphere(kDesk, INFINITY).real() == doctest::Approx(-2.0 * kPi * 1e-6).epsilon(1e-15));

  SphereSpec plain = kDesk;
  plain.mu_r = 1.0;
  CHECK(mpt_sphere(plain, 0.0) == 0.0);
  // tiny nu stays on the static value through the series branch
  CHECK(std::abs(mpt_sphere(kDesk, 1e-6) - sphere_static(kDesk)) < 1e-9 * sphere_static(kDesk));
}

TEST_CASE("closed form against radial shooting") {
  for (double mu_r : {1.0, 1.5, 4.0, 0.5}) {
    SphereSpec spec = kDesk;
    spec.mu_r = mu_r;
    const double a3 = 1e-6;
    for (double nu : FrequencyGrid::logarithmic(1e-2, 3e3, 25).values) {
      const cd closed = sphere_m_w(spec, cd(0.0, nu));
      const cd shot = m_by_shooting(spec, nu);
      CHECK(std::abs(closed - shot) <= 1e-8 * 2.0 * kPi * a3);
      CHECK(std::abs(mpt_sphere(spec, nu / spec.time_scale()) - closed) <= 1e-14 * std::abs(closed) + 1e-20);
    }
  }
}

TEST_CASE("evenness in x and Schwarz symmetry") {
  for (double re : {0.05, 0.7, 3.0, 25.0, 300.0})
    for (double im : {-40.0, -2.0, -0.1, 0.0, 0.1, 2.0, 40.0}) {
      const cd x(re, im);
      const cd a = sphere_m_from_x(kDesk, x), b = sphere_m_from_x(kDesk, -x);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
  for (double re : {-50.0, -3.0, 0.5, 4.0, 100.0})
    for (double im : {-1e3, -5.0, 0.3, 8.0, 1e4}) {
      const cd w(re, im);
      const cd a = sphere_m_w(kDesk, w), b = sphere_m_w(kDesk, std::conj(w));
      CHECK(std::abs(b - std::conj(a)) <= 1e-13 * std::abs(a));
    }
}

TEST_CASE("curve shape on the real frequency axis") {
  const FrequencyGrid grid = FrequencyGrid::logarithmic(2.0 * kPi * 1e-2, 2.0 * kPi * 1e8, 200);
  double prev_re = INFINITY;
  int rises = 0, falls = 0;
  double prev_im = -1.0;
  for (double omega : grid.values) {
    const cd m = mpt_sphere(kDesk, omega);
    CHECK(m.imag() >= 0.0);
    CHECK(m.real() <= prev_re);
    if (prev_im >= 0.0) (m.imag() > prev_im ? (falls ? ++rises : rises) : ++falls);
    prev_re = m.real();
    prev_im = m.imag();
  }
  // rises counted only after the first fall: single peak
  CHECK(rises == 0);
  CHECK(falls > 0);
  CHECK_THROWS_AS(mpt_sphere(kDesk, -1.0), Error);
  CHECK_THROWS_AS((SphereSpec{0.0, 1.5, 1.0}.validate()), Error);
  CHECK_THROWS_AS((SphereSpec{0.01, -1.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((SphereSpec{0.01, 1.5, NAN}.validate()), Error);
}

TEST_CASE("poles") {
  SphereSpec plain = kDesk;
  plain.mu_r = 1.0;
  const std::vector<double> p1 = sphere_poles(plain, 20);
  for (std::size_t n = 0; n < p1.size(); ++n) {
    const double expect = std::pow((n + 1) * kPi, 2);
    CHECK(p1[n] == doctest::Approx(expect).epsilon(1e-11));
  }
  CHECK(p1[0] == doctest::Approx(9.8696).epsilon(1e-5));
  CHECK(p1[1] == doctest::Approx(39.478).epsilon(1e-4));

  for (double mu_r : {1.5, 0.3, 7.0, 50.0}) {
    SphereSpec spec = kDesk;
    spec.mu_r = mu_r;
    const std::vector<double> p = sphere_poles(spec, 25);
    const std::vector<double> oracle = brent_poles(mu_r, 25);
    for (std::size_t n = 0; n < p.size(); ++n) {
      CHECK(p[n] == doctest::Approx(oracle[n]).epsilon(1e-11));
      if (n) CHECK(p[n] > p[n - 1]);
      // genuine simple poles of the continued m: (w - lambda) m(w) tends to a finite non-zero limit
      // symmetric differences cancel the regular part and the 1e-12 root error to second order
      auto res = [&](double d) { return 0.5 * d * (sphere_m_w(spec, p[n] + d) - sphere_m_w(spec, p[n] - d)); };
      const cd r1 = res(1e-6 * p[n]), r2 = res(2e-6 * p[n]);
      CHECK(std::abs(r1) > 1e-3 * std::abs(sphere_static(spec)) / double((n + 1) * (n + 1)));
      CHECK(std::abs(r1 - r2) <= 1e-6 * std::abs(r1));
    }
  }
  const std::vector<double> desk = sphere_poles(kDesk, 2);
  CHECK(desk[0] == doctest::Approx(7.19856).epsilon(1e-5));
  CHECK(desk[1] == doctest::Approx(26.9722).epsilon(1e-5));
  CHECK_THROWS_AS(sphere_poles(kDesk, 0), Error);
}

TEST_CASE("spectral model from the analytic solution") {
  const SpectralModel m30 = sphere_spectral_model(kDesk, 30);
  CHECK(m30.size() == 30);
  CHECK(m30.provenance() == Provenance::SphereAnalytic);
  REQUIRE(m30.tail_bound().has_value());
  CHECK(testing::rel(m30.n0(), SymTensor3::identity(sphere_static(kDesk))) < 1e-15);
  for (const Mode& mode : m30.modes()) CHECK(mode.multiplicity() == 3);

  // the residues match a direct small-circle integral of m about each pole
  const std::vector<double> poles = sphere_poles(kDesk, 31);
  for (std::size_t n = 0; n < 30; ++n) {
    const double lam = poles[n];
    const double r = 1e-5 * lam;
    cd acc = 0.0;
    for (int k = 0; k < 64; ++k) {
      const cd dz = std::polar(r, 2.0 * kPi * (k + 0.5) / 64);
      acc += sphere_m_w(kDesk, lam + dz) * dz;
    }
    acc /= 64.0;  // residue of m in w
    // (lambda/(w - lambda) + 1) A has residue lambda A
    const double a = mode_tensor(m30, n)(0, 0);
    CHECK(a * lam == doctest::Approx(acc.real()).epsilon(1e-6));
    CHECK(std::abs(acc.imag()) < 1e-6 * std::abs(acc.real()));
  }

  // 30 modes: error stays inside the stored tail bound
  const double tail = *m30.tail_bound();
  CHECK(tail > 0.0);
  for (double f : FrequencyGrid::logarithmic(1e-2, 1e8, 120).values) {
    const double nu = m30.nu_from_hz(f);
    const cd exact = mpt_sphere(kDesk, 2.0 * kPi * f);
    const Assembly a = assemble(m30, nu);
    CHECK(std::abs(a.m(0, 0) - exact) <= 1e-3 * std::abs(exact) + tail);
    CHECK(std::abs(a.m(0, 1)) == 0.0);
  }

  // with enough modes the truncation error drops below 1e-3 everywhere
  const SpectralModel big = sphere_spectral_model(kDesk, 1000);
  double worst = 0.0;
  for (double f : FrequencyGrid::logarithmic(1e-2, 1e8, 120).values) {
    const cd exact = mpt_sphere(kDesk, 2.0 * kPi * f);
    worst = std::max(worst, std::abs(assemble(big, big.nu_from_hz(f)).m(0, 0) - exact) / std::abs(exact));
  }
  MESSAGE("1000-mode worst relative error " << worst);
  CHECK(worst < 1e-3);
  CHECK(std::abs(limit_tensors(big).m_inf(0, 0) + 2.0 * kPi * 1e-6) < 1e-3 * 2.0 * kPi * 1e-6);
}

TEST_CASE("single mode and frequency conversion") {
  const SpectralModel one = sphere_spectral_model(kDesk, 1);
  const double lam = one.modes()[0].lambda;
  double best_nu = 0.0, best = -1.0;
  for (double nu : FrequencyGrid::logarithmic(lam * 1e-2, lam * 1e2, 4001).values) {
    const double im = assemble(one, nu).i(2, 2);
    if (im > best) best = im, best_nu = nu;
  }
  CHECK(best_nu == doctest::Approx(lam).epsilon(2e-3));
  CHECK(one.nu_from_hz(1e4) == doctest::Approx(47.06).epsilon(0.1 / 47.06));
  CHECK(kDesk.time_scale() == doctest::Approx(one.time_scale()).epsilon(1e-15));
  CHECK_THROWS_AS(sphere_spectral_model(kDesk, 0), Error);
}
