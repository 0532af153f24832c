#include "mpt/sphere.hpp"

#include <cmath>
#include <cstdio>

namespace mpt {

using cd = std::complex<double>;

void SphereSpec::validate() const {
  for (double v : {alpha, mu_r, sigma_star})
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "sphere parameters must be positive");
}

double sphere_static(const SphereSpec& spec) {
  spec.validate();
  const double a3 = spec.alpha * spec.alpha * spec.alpha;
  return 4.0 * kPi * a3 * (spec.mu_r - 1.0) / (spec.mu_r + 2.0);
}

namespace {

// 1 - x cot x for |x| small
cd one_minus_xcot_series(cd x) {
  static constexpr double c[] = {1.0 / 3.0,         1.0 / 45.0,       2.0 / 945.0,          1.0 / 4725.0,
                                 2.0 / 93555.0, 1382.0 / 638512875.0, 4.0 / 18243225.0};
  const cd x2 = x * x;
  cd p = x2, sum = 0.0;
  for (double ck : c) {
    sum += ck * p;
    p *= x2;
  }
  return sum;
}

// g = x j0/j1 = x^2 / (1 - x cot x)
cd g_ratio(cd x) {
  if (std::abs(x) < 0.2) return x * x / one_minus_xcot_series(x);
  cd cot;
  if (x.imag() >= 0.0) {
    const cd e = std::exp(cd(0.0, 2.0) * x);  // |e| <= 1
    cot = cd(0.0, 1.0) * (e + 1.0) / (e - 1.0);
  } else {
    const cd e = std::exp(cd(0.0, -2.0) * x);
    cot = cd(0.0, -1.0) * (e + 1.0) / (e - 1.0);
  }
  return x * x / (1.0 - x * cot);
}

}  // namespace

std::complex<double> sphere_m_from_x(const SphereSpec& spec, std::complex<double> x) {
  const cd g = g_ratio(x);
  const cd rho = (g - 1.0) / spec.mu_r;
  const double a3 = spec.alpha * spec.alpha * spec.alpha;
  const cd m = 2.0 * kPi * a3 * (2.0 - rho) / (1.0 + rho);
  if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "sphere Bessel ratio overflow at |v| = %.6g", std::abs(x));
    throw Error(ErrorKind::NumericRange, buf);
  }
  return m;
}

namespace {

cd m_from_x2(const SphereSpec& spec, cd x2) { return sphere_m_from_x(spec, std::sqrt(x2)); }

}  // namespace

std::complex<double> mpt_sphere(const SphereSpec& spec, double omega) {
  spec.validate();
  if (!(omega >= 0.0)) throw Error(ErrorKind::Domain, "mpt_sphere: omega must be non-negative");
  if (omega == 0.0) return sphere_static(spec);
  if (std::isinf(omega)) return -2.0 * kPi * spec.alpha * spec.alpha * spec.alpha;
  const double nu = omega * spec.time_scale();
  return m_from_x2(spec, cd(0.0, spec.mu_r * nu));
}

std::complex<double> sphere_m_w(const SphereSpec& spec, std::complex<double> w) {
  spec.validate();
  if (w == cd(0.0)) return sphere_static(spec);
  return m_from_x2(spec, spec.mu_r * w);
}

double sphere_characteristic(double x, double mu_r) {
  return x * x * std::sin(x) - (1.0 - mu_r) * (std::sin(x) - x * std::cos(x));
}

std::vector<double> sphere_poles(const SphereSpec& spec, std::size_t count) {
  spec.validate();
  if (count < 1) throw Error(ErrorKind::InvalidInput, "sphere_poles: count must be >= 1");
  const double step = kPi / 32.0;
  const double x_limit = (static_cast<double>(count) + 2.0) * kPi * 4.0 + 64.0;
  std::vector<double> roots;
  roots.reserve(count);
  double lo = step / 2.0;
  double f_lo = sphere_characteristic(lo, spec.mu_r);
  while (roots.size() < count) {
    const double hi = lo + step;
    if (hi > x_limit) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "sphere_poles: found %zu of %zu roots scanning x in [%.6g, %.6g]", roots.size(),
                    count, step / 2.0, x_limit);
      throw Error(ErrorKind::RootBracket, buf);
    }
    const double f_hi = sphere_characteristic(hi, spec.mu_r);
    if (f_lo == 0.0) {
      roots.push_back(lo);
    } else if (f_lo * f_hi < 0.0) {
      double a = lo, b = hi, fa = f_lo;
      while (b - a > 1e-12 * b) {
        const double mid = 0.5 * (a + b);
        const double fm = sphere_characteristic(mid, spec.mu_r);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  std::vector<double> lambdas(count);
  for (std::size_t n = 0; n < count; ++n) lambdas[n] = roots[n] * roots[n] / spec.mu_r;
  return lambdas;
}

SpectralModel sphere_spectral_model(const SphereSpec& spec, std::size_t n_modes) {
  spec.validate();
  if (n_modes < 1) throw Error(ErrorKind::InvalidInput, "sphere_spectral_model: n_modes must be >= 1");
  const std::vector<double> poles = sphere_poles(spec, n_modes + 1);
  const double a3 = spec.alpha * spec.alpha * spec.alpha;
  const double n0 = sphere_static(spec);

  std::vector<Mode> modes;
  modes.reserve(n_modes);
  double sum_a = 0.0;
  for (std::size_t n = 0; n < n_modes; ++n) {
    const double lambda = poles[n];
    double gap = poles[n + 1] - lambda;
    if (n > 0) gap = std::min(gap, lambda - poles[n - 1]);
    const double radius = 1e-3 * gap;
    if (!(radius > 1e-10 * lambda))
      throw Error(ErrorKind::ResidueSpacing, "sphere residue contour too close to a neighbouring pole");

    constexpr int kPoints = 16;
    cd res = 0.0;
    for (int k = 0; k < kPoints; ++k) {
      const cd dw = std::polar(radius, 2.0 * kPi * (k + 0.5) / kPoints);
      res += dw * sphere_m_w(spec, lambda + dw);
    }
    res /= static_cast<double>(kPoints);

    const double a = res.real() / lambda;  // residue in w is lambda A
    if (!(a < 0.0) || std::abs(res.imag()) > 1e-6 * std::abs(res.real()))
      throw Error(ErrorKind::ResidueSpacing, "sphere residue extraction failed at mode " + std::to_string(n));
    sum_a += a;
    const double c = std::sqrt(-4.0 * a / (a3 * lambda));
    Mode mode;
    mode.lambda = lambda;
    mode.couplings = {Vec3{c, 0.0, 0.0}, Vec3{0.0, c, 0.0}, Vec3{0.0, 0.0, c}};
    modes.push_back(std::move(mode));
  }
  const double tail = std::abs((-2.0 * kPi * a3 - n0) - sum_a);
  return SpectralModel(spec.alpha, spec.sigma_star, SymTensor3::identity(n0), std::move(modes),
                       Provenance::SphereAnalytic, std::string("simply connected"), tail);
}

}  // namespace mpt
