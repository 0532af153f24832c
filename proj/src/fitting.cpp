#include "mpt/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mpt {

double fit_model(FitKind kind, double amplitude, double eigen, double nu) noexcept {
  const double den = nu * nu + eigen * eigen;
  if (den == 0.0) return 0.0;
  return kind == FitKind::R ? -amplitude * eigen * nu * nu / den : amplitude * eigen * nu / den;
}

namespace {

// d f / d amplitude, d f / d eigen
std::array<double, 2> gradient(FitKind kind, double amp, double eig, double nu) {
  const double den = nu * nu + eig * eig;
  if (den == 0.0) return {0.0, 0.0};
  if (kind == FitKind::R) return {-eig * nu * nu / den, -amp * nu * nu * (nu * nu - eig * eig) / (den * den)};
  return {eig * nu / den, amp * nu * (nu * nu - eig * eig) / (den * den)};
}

double cost(const SweepData& d, FitKind kind, double amp, double eig) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.nu.size(); ++k) {
    const double r = fit_model(kind, amp, eig, d.nu[k]) - d.values[k];
    s += r * r;
  }
  return s;
}

struct LocalFit {
  double amp, eig, cost;
  bool converged;
  int iterations;
};

LocalFit levenberg_marquardt(const SweepData& d, FitKind kind, double amp, double eig) {
  double mu = 1e-3;
  double c = cost(d, kind, amp, eig);
  LocalFit out{amp, eig, c, false, 0};
  for (int it = 1; it <= 200; ++it) {
    out.iterations = it;
    double jtj[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double jtr[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < d.nu.size(); ++k) {
      const auto g = gradient(kind, amp, eig, d.nu[k]);
      const double r = fit_model(kind, amp, eig, d.nu[k]) - d.values[k];
      for (int p = 0; p < 2; ++p) {
        jtr[p] += g[p] * r;
        for (int q = 0; q < 2; ++q) jtj[p][q] += g[p] * g[q];
      }
    }
    const double a00 = jtj[0][0] * (1.0 + mu), a11 = jtj[1][1] * (1.0 + mu), a01 = jtj[0][1];
    const double det = a00 * a11 - a01 * a01;
    if (!(det > 0.0) || !std::isfinite(det)) {
      out.converged = jtr[0] == 0.0 && jtr[1] == 0.0;
      break;
    }
    const double da = -(a11 * jtr[0] - a01 * jtr[1]) / det;
    const double de = -(a00 * jtr[1] - a01 * jtr[0]) / det;
    const double trial = cost(d, kind, amp + da, eig + de);
    if (trial < c) {
      amp += da;
      eig += de;
      c = trial;
      mu /= 10.0;
      const double step = std::hypot(da / std::max(std::abs(amp), std::numeric_limits<double>::min()),
                                     de / std::max(std::abs(eig), std::numeric_limits<double>::min()));
      if (step < 1e-10) {
        out.converged = true;
        break;
      }
    } else {
      mu *= 10.0;
      if (mu > 1e20) {
        // no descent direction left at machine precision
        out.converged = true;
        break;
      }
    }
  }
  out.amp = amp;
  out.eig = eig;
  out.cost = c;
  return out;
}

}  // namespace

FitResult fit_dominant(const SweepData& data, FitKind kind) {
  if (data.nu.size() != data.values.size()) throw Error(ErrorKind::InvalidInput, "fit: nu and values differ in length");
  if (data.nu.size() < 4) throw Error(ErrorKind::InvalidInput, "fit: need at least 4 points");
  for (std::size_t k = 0; k < data.nu.size(); ++k)
    if (!(data.nu[k] >= 0.0) || !std::isfinite(data.values[k]))
      throw Error(ErrorKind::InvalidInput, "fit: nu must be >= 0 and values finite");
  if (std::all_of(data.values.begin(), data.values.end(), [](double v) { return v == 0.0; }))
    throw Error(ErrorKind::NoFit, "fit: data identically zero");

  double nu_lo = std::numeric_limits<double>::infinity(), nu_hi = 0.0;
  for (double v : data.nu)
    if (v > 0.0) {
      nu_lo = std::min(nu_lo, v);
      nu_hi = std::max(nu_hi, v);
    }
  if (!(nu_hi > 0.0)) throw Error(ErrorKind::NoFit, "fit: no positive frequencies");

  std::vector<double> starts;
  for (int e = static_cast<int>(std::floor(std::log10(nu_lo))); e <= static_cast<int>(std::ceil(std::log10(nu_hi)));
       ++e)
    starts.push_back(std::pow(10.0, e));
  if (kind == FitKind::I) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < data.values.size(); ++k)
      if (std::abs(data.values[k]) > std::abs(data.values[best])) best = k;
    if (data.nu[best] > 0.0) starts.insert(starts.begin(), data.nu[best]);
  }

  LocalFit best{0.0, 0.0, std::numeric_limits<double>::infinity(), false, 0};
  for (double e0 : starts) {
    // amplitude enters linearly: least-squares initial value
    double gy = 0.0, gg = 0.0;
    for (std::size_t k = 0; k < data.nu.size(); ++k) {
      const double g = fit_model(kind, 1.0, e0, data.nu[k]);
      gy += g * data.values[k];
      gg += g * g;
    }
    if (gg == 0.0) continue;
    const LocalFit f = levenberg_marquardt(data, kind, gy / gg, e0);
    if (std::isfinite(f.cost) && f.cost < best.cost) best = f;
  }
  if (!std::isfinite(best.cost)) throw Error(ErrorKind::NoFit, "fit: every start failed");

  FitResult r;
  r.amplitude = best.eig < 0.0 ? -best.amp : best.amp;
  r.eigen = std::abs(best.eig);
  r.converged = best.converged && r.eigen > 0.0;
  r.iterations = best.iterations;
  r.rms = std::sqrt(best.cost / static_cast<double>(data.nu.size()));
  r.residuals.resize(data.nu.size());
  for (std::size_t k = 0; k < data.nu.size(); ++k) {
    const double diff = std::abs(data.values[k] - fit_model(kind, r.amplitude, r.eigen, data.nu[k]));
    r.residuals[k] = kind == FitKind::R ? -diff : diff;
  }
  return r;
}

bool eigen_estimates_agree(double b, double d) noexcept {
  return std::abs(b - d) <= 0.15 * std::max(std::abs(b), std::abs(d));
}

FitTable fit_report(const std::vector<double>& nu, const std::vector<Assembly>& sweep_values, double nu_max,
                    Execution exec) {
  if (nu.size() != sweep_values.size()) throw Error(ErrorKind::InvalidInput, "fit_report: size mismatch");
  FitTable table;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < nu.size(); ++k)
    if (nu[k] <= nu_max) {
      keep.push_back(k);
      table.nu.push_back(nu[k]);
    }
  constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
  table.rows.resize(6);
  std::vector<std::string> errors(6);

  auto fit_one = [&](int c) {
    CoefficientFit& row = table.rows[c];
    row.i = kPairs[c][0];
    row.j = kPairs[c][1];
    SweepData dr{table.nu, {}}, di{table.nu, {}};
    for (std::size_t k : keep) {
      dr.values.push_back(sweep_values[k].r(row.i, row.j));
      di.values.push_back(sweep_values[k].i(row.i, row.j));
    }
    auto zero = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    if (zero(dr.values) && zero(di.values)) {
      row.skipped = true;
      return;
    }
    try {
      row.r = fit_dominant(dr, FitKind::R);
      row.im = fit_dominant(di, FitKind::I);
    } catch (const Error& e) {
      errors[c] = e.what();
    }
  };

  if (exec == Execution::Serial) {
    for (int c = 0; c < 6; ++c) fit_one(c);
  } else {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < 6; ++c) fit_one(c);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorKind::NoFit, "fit_report: " + e);
  return table;
}

}  // namespace mpt
