#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpt/fitting.hpp"
#include "mpt/sphere.hpp"
#include "support.hpp"

using namespace mpt;

namespace {

SweepData synthetic(FitKind kind, double amp, double eig, double nu_max, int n = 120) {
  SweepData d;
  for (double nu : FrequencyGrid::linear(0.0, nu_max, n).values) {
    d.nu.push_back(nu);
    d.values.push_back(fit_model(kind, amp, eig, nu));
  }
  return d;
}

// best rms over a dense log grid of the eigen parameter, amplitude by linear least squares
double brute_force_rms(const SweepData& d, FitKind kind) {
  double best = INFINITY;
  for (double e : FrequencyGrid::logarithmic(1e-3, 1e5, 20000).values) {
    double gg = 0.0, gv = 0.0;
    for (std::size_t k = 0; k < d.nu.size(); ++k) {
      const double g = fit_model(kind, 1.0, e, d.nu[k]);
      gg += g * g;
      gv += g * d.values[k];
    }
    if (gg == 0.0) continue;
    const double a = gv / gg;
    double ss = 0.0;
    for (std::size_t k = 0; k < d.nu.size(); ++k) ss += std::pow(fit_model(kind, a, e, d.nu[k]) - d.values[k], 2);
    best = std::min(best, std::sqrt(ss / d.nu.size()));
  }
  return best;
}

SweepData sweep_entry(const SpectralModel& m, const std::vector<double>& nu, FitKind kind, int i, int j) {
  SweepData d;
  d.nu = nu;
  for (double v : nu) {
    const Assembly a = assemble(m, v);
    d.values.push_back(kind == FitKind::R ? a.r(i, j) : a.i(i, j));
  }
  return d;
}

}  // namespace

TEST_CASE("model functions") {
  CHECK(fit_model(FitKind::R, 2.0, 5.0, 0.0) == 0.0);
  CHECK(fit_model(FitKind::I, 2.0, 5.0, 0.0) == 0.0);
  CHECK(fit_model(FitKind::R, 2.0, 5.0, 5.0) == doctest::Approx(-5.0));
  CHECK(fit_model(FitKind::I, 2.0, 5.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("noiseless recovery") {
  const FitResult fi = fit_dominant(synthetic(FitKind::I, 3.0, 20.0, 100.0), FitKind::I);
  CHECK(fi.converged);
  CHECK(fi.amplitude == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(fi.eigen == doctest::Approx(20.0).epsilon(1e-8));
  const FitResult fr = fit_dominant(synthetic(FitKind::R, 0.7, 4.0, 50.0), FitKind::R);
  CHECK(fr.amplitude == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(fr.eigen == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(fr.rms < 1e-12);
  CHECK(fr.iterations > 0);
  CHECK(fr.iterations <= 200);

  // negative amplitudes come back with a positive eigen estimate
  const FitResult neg = fit_dominant(synthetic(FitKind::I, -2.0, 9.0, 60.0), FitKind::I);
  CHECK(neg.eigen == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(neg.amplitude == doctest::Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const SpectralModel m = testing::two_mode_model();
  const std::vector<double> nu = FrequencyGrid::linear(0.0, 40.0, 150).values;
  for (FitKind kind : {FitKind::R, FitKind::I}) {
    const SweepData base = sweep_entry(m, nu, kind, 0, 0);
    const FitResult f0 = fit_dominant(base, kind);
    const double k = u(rng) * 1e3;
    SweepData scaled = base;
    for (double& v : scaled.values) v *= k;
    const FitResult fk = fit_dominant(scaled, kind);
    CHECK(fk.amplitude == doctest::Approx(k * f0.amplitude).epsilon(1e-8));
    CHECK(fk.eigen == doctest::Approx(f0.eigen).epsilon(1e-8));
    SweepData stretched = base;
    const double s = u(rng) * 7.0;
    for (double& v : stretched.nu) v *= s;
    const FitResult fs = fit_dominant(stretched, kind);
    CHECK(fs.eigen == doctest::Approx(s * f0.eigen).epsilon(1e-8));
  }
}

TEST_CASE("single-mode data gives the eigenvalue") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 8; ++t) {
    const SpectralModel full = testing::random_model(rng, 1);
    const double lam = full.modes()[0].lambda;
    const std::vector<double> nu = FrequencyGrid::logarithmic(1e-2 * lam, 1e2 * lam, 200).values;
    for (int i = 0; i < 3; ++i) {
      const FitResult b = fit_dominant(sweep_entry(full, nu, FitKind::R, i, i), FitKind::R);
      const FitResult d = fit_dominant(sweep_entry(full, nu, FitKind::I, i, i), FitKind::I);
      CHECK(b.eigen == doctest::Approx(lam).epsilon(1e-6));
      CHECK(d.eigen == doctest::Approx(lam).epsilon(1e-6));
      CHECK(eigen_estimates_agree(b.eigen, d.eigen));
    }
  }
}

TEST_CASE("returned fit is no worse than a dense scan") {
  const SpectralModel m = testing::two_mode_model();
  const std::vector<double> nu = FrequencyGrid::linear(0.0, 60.0, 100).values;
  for (FitKind kind : {FitKind::R, FitKind::I})
    for (int i = 0; i < 3; ++i) {
      const SweepData d = sweep_entry(m, nu, kind, i, i);
      const FitResult f = fit_dominant(d, kind);
      CHECK(f.rms <= brute_force_rms(d, kind) * (1.0 + 1e-9));
      REQUIRE(f.residuals.size() == d.nu.size());
      for (std::size_t k = 0; k < d.nu.size(); ++k) {
        const double diff = std::abs(d.values[k] - fit_model(kind, f.amplitude, f.eigen, d.nu[k]));
        CHECK(f.residuals[k] == doctest::Approx(kind == FitKind::R ? -diff : diff));
      }
    }
}

TEST_CASE("two modes with a dominant first mode") {
  std::vector<Mode> modes(2);
  modes[0].lambda = 5.0;
  modes[0].couplings = {{1.0, 0.8, 0.5}};
  modes[1].lambda = 600.0;
  modes[1].couplings = {{0.05, 0.02, 0.03}};
  const SpectralModel m(0.01, 5.96e6, SymTensor3::identity(1e-6), modes);
  const double nu_max = 50.0;
  const std::vector<double> nu = FrequencyGrid::linear(0.0, nu_max, 200).values;
  for (int i = 0; i < 3; ++i) {
    const double lam = m.modes()[dominant_mode(m, i, i, nu_max)].lambda;
    CHECK(lam == 5.0);
    CHECK(fit_dominant(sweep_entry(m, nu, FitKind::R, i, i), FitKind::R).eigen == doctest::Approx(lam).epsilon(0.1));
    CHECK(fit_dominant(sweep_entry(m, nu, FitKind::I, i, i), FitKind::I).eigen == doctest::Approx(lam).epsilon(0.1));
  }
}

TEST_CASE("errors and agreement rule") {
  CHECK_THROWS_AS(fit_dominant(SweepData{{0, 1, 2}, {0, 1, 2}}, FitKind::I), Error);
  CHECK_THROWS_AS(fit_dominant(SweepData{{0, 1, 2, 3}, {0, 1, 2}}, FitKind::I), Error);
  try {
    fit_dominant(SweepData{{0, 1, 2, 3, 4}, {0, 0, 0, 0, 0}}, FitKind::R);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoFit);
  }
  CHECK(eigen_estimates_agree(10.0, 8.5));
  CHECK(eigen_estimates_agree(8.5, 10.0));
  CHECK_FALSE(eigen_estimates_agree(10.0, 8.4));
  CHECK_FALSE(eigen_estimates_agree(8.64, 10.22));
}

TEST_CASE("fit report") {
  const SphereSpec spec;
  const SpectralModel sphere = sphere_spectral_model(spec, 30);
  const double nu_max = sphere.nu_from_hz(1e4);
  std::vector<double> nu{0.0};
  for (double v : FrequencyGrid::logarithmic(nu_max * 1e-4, nu_max, 120).values) nu.push_back(v);
  std::vector<Assembly> values;
  for (double v : nu) values.push_back(assemble(sphere, v));
  const FitTable t = fit_report(nu, values, nu_max);
  REQUIRE(t.rows.size() == 6);
  for (int k = 0; k < 3; ++k) {
    CHECK_FALSE(t.rows[k].skipped);
    CHECK(t.rows[k].r.eigen == t.rows[0].r.eigen);
    CHECK(t.rows[k].im.eigen == t.rows[0].im.eigen);
  }
  for (int k = 3; k < 6; ++k) CHECK(t.rows[k].skipped);
  CHECK(t.rows[3].i == 0);
  CHECK(t.rows[3].j == 1);
  // both estimates land near 10
  CHECK(t.rows[0].r.eigen == doctest::Approx(10.0).epsilon(0.15));
  CHECK(t.rows[0].im.eigen == doctest::Approx(10.0).epsilon(0.15));

  std::vector<Mode> modes(2);
  modes[0].lambda = 3.0;
  modes[0].couplings = {{1.0, 0.0, 0.3}};
  modes[1].lambda = 60.0;
  modes[1].couplings = {{0.0, 1.0, 0.3}};
  const SpectralModel aniso(0.01, 5.96e6, SymTensor3::identity(1e-6), modes);
  const std::vector<double> grid = FrequencyGrid::linear(0.0, 200.0, 300).values;
  std::vector<Assembly> av;
  for (double v : grid) av.push_back(assemble(aniso, v));
  const FitTable at = fit_report(grid, av, 200.0);
  CHECK(at.rows[0].r.eigen == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(at.rows[1].r.eigen == doctest::Approx(60.0).epsilon(1e-6));
  CHECK(at.rows[3].skipped);  // 12 couples nothing
  CHECK_FALSE(at.rows[4].skipped);

  // points above nu_max are ignored
  const FitTable cut = fit_report(grid, av, 100.0);
  CHECK(cut.nu.back() <= 100.0);
  CHECK(cut.rows[0].r.residuals.size() == cut.nu.size());
}
