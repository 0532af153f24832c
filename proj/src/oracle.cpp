#include "mpt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mpt {

const char* to_string(SpectrumShape s) noexcept {
  switch (s) {
    case SpectrumShape::Linear: return "linear";
    case SpectrumShape::Quadratic: return "quadratic";
    case SpectrumShape::Clustered: return "clustered";
  }
  return "linear";
}

SpectrumShape spectrum_shape_from_string(const std::string& s) {
  if (s == "linear") return SpectrumShape::Linear;
  if (s == "quadratic") return SpectrumShape::Quadratic;
  if (s == "clustered") return SpectrumShape::Clustered;
  throw Error(ErrorKind::InvalidInput, "shape must be linear, quadratic or clustered");
}

SurrogateProblem generate(int dim, std::uint64_t seed, SpectrumShape shape) {
  if (dim < 2) throw Error(ErrorKind::InvalidInput, "generate: dim must be >= 2");
  SurrogateProblem p;
  p.dim = dim;
  p.seed = seed;
  p.shape = shape;
  p.spectrum.resize(dim);
  for (int n = 0; n < dim; ++n) {
    const double k = n + 1.0;
    switch (shape) {
      case SpectrumShape::Linear: p.spectrum[n] = k; break;
      case SpectrumShape::Quadratic: p.spectrum[n] = k * k; break;
      case SpectrumShape::Clustered: {
        const double base = (n / 2 + 1.0) * (n / 2 + 1.0);
        p.spectrum[n] = n % 2 == 0 ? base : base * (1.0 + 1e-12);
        break;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c)
    if (rr(c, c) < 0.0) q.col(c) = -q.col(c);

  const Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(p.spectrum.data(), dim);
  p.k = q * lam.asDiagonal() * q.transpose();
  p.k = 0.5 * (p.k + p.k.transpose()).eval();

  for (auto& t : p.theta0) {
    t.resize(dim);
    for (int r = 0; r < dim; ++r) t[r] = normal(rng);
    t.normalize();
  }
  return p;
}

std::array<Eigen::VectorXcd, 3> direct_theta1(const SurrogateProblem& p, double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorKind::Domain, "direct_theta1: nu must be non-negative");
  std::array<Eigen::VectorXcd, 3> out;
  if (nu == 0.0) {
    for (auto& v : out) v = Eigen::VectorXcd::Zero(p.dim);
    return out;
  }
  Eigen::MatrixXcd a = p.k.cast<std::complex<double>>();
  a.diagonal().array() -= std::complex<double>(0.0, nu);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  for (int i = 0; i < 3; ++i) out[i] = lu.solve(std::complex<double>(0.0, nu) * p.theta0[i].cast<std::complex<double>>());
  return out;
}

SurrogateSpectrum decompose(const SurrogateProblem& p) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.k);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "decompose: eigen-solver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-12 * std::max(std::abs(ev.maxCoeff()), 1.0);
  int first = 0;
  while (first < p.dim && ev[first] <= cut) ++first;
  const int count = p.dim - first;
  SurrogateSpectrum s;
  s.values = ev.tail(count);
  s.vectors = es.eigenvectors().rightCols(count);
  s.couplings.resize(count, 3);
  for (int i = 0; i < 3; ++i) s.couplings.col(i) = s.vectors.transpose() * p.theta0[i];
  return s;
}

SpectralModel spectrum_model(const SurrogateProblem& p, const SurrogateSpectrum& s, const SymTensor3& n0) {
  const auto count = static_cast<std::size_t>(s.values.size());
  std::vector<double> lambdas(count);
  std::vector<Vec3> rows(count);
  for (std::size_t n = 0; n < count; ++n) {
    lambdas[n] = s.values[static_cast<Eigen::Index>(n)];
    for (int i = 0; i < 3; ++i) rows[n][i] = s.couplings(static_cast<Eigen::Index>(n), i);
  }
  return SpectralModel(p.alpha, p.sigma_star, n0, merge_eigenpairs(lambdas, rows), Provenance::Surrogate);
}

SpectralModel eigen_model(const SurrogateProblem& p, const SymTensor3& n0) {
  return spectrum_model(p, decompose(p), n0);
}

std::array<Eigen::VectorXcd, 3> series_theta1(const SurrogateSpectrum& s, double nu) {
  const Eigen::Index count = s.values.size();
  Eigen::VectorXcd b(count);
  for (Eigen::Index n = 0; n < count; ++n) b[n] = beta(nu, s.values[n]);
  std::array<Eigen::VectorXcd, 3> out;
  for (int i = 0; i < 3; ++i)
    out[i] = s.vectors.cast<std::complex<double>>() * (b.array() * s.couplings.col(i).array()).matrix();
  return out;
}

EnergyTensors energy_tensors(const SurrogateProblem& p, const std::array<Eigen::VectorXcd, 3>& theta1, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "energy tensors need nu > 0");
  const double a3 = p.alpha * p.alpha * p.alpha;
  std::array<Eigen::VectorXcd, 3> kt;
  for (int i = 0; i < 3; ++i) kt[i] = p.k * theta1[i];
  EnergyTensors e;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      e.r.at(i, j) = -(a3 / 4.0) * theta1[j].dot(kt[i]).real();
      e.i.at(i, j) = (a3 / (4.0 * nu)) * kt[j].dot(kt[i]).real();
    }
  return e;
}

EnergyTensors energy_tensors_direct(const SurrogateProblem& p, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "energy_tensors_direct: nu must be positive");
  return energy_tensors(p, direct_theta1(p, nu), nu);
}

AlternativeForms alternative_forms(const SurrogateProblem& p, const std::array<Eigen::VectorXcd, 3>& theta1,
                                   double nu) {
  const double a3 = p.alpha * p.alpha * p.alpha;
  // theta1 + theta0 solves (K - i nu I) u = K theta0; solving for u directly
  // avoids the cancellation Re theta1 ~ -theta0 for nu >> lambda.
  Eigen::MatrixXcd a = p.k.cast<std::complex<double>>();
  a.diagonal().array() -= std::complex<double>(0.0, nu);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  AlternativeForms f;
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXcd u = lu.solve((p.k * p.theta0[i]).cast<std::complex<double>>());
    for (int j = 0; j < 3; ++j) {
      f.r[i][j] = -(a3 * nu / 4.0) * theta1[i].imag().dot(p.theta0[j]);
      f.i[i][j] = (a3 * nu / 4.0) * u.real().dot(p.theta0[j]);
    }
  }
  return f;
}

SurrogateProblem rotate_sources(const SurrogateProblem& p, const Rotation3& q) {
  SurrogateProblem out = p;
  for (int i = 0; i < 3; ++i) {
    out.theta0[i] = Eigen::VectorXd::Zero(p.dim);
    for (int j = 0; j < 3; ++j) out.theta0[i] += q(i, j) * p.theta0[j];
  }
  return out;
}

std::vector<double> default_oracle_grid(const SurrogateProblem& p) {
  const auto [lo, hi] = std::minmax_element(p.spectrum.begin(), p.spectrum.end());
  return FrequencyGrid::logarithmic(1e-3 * *lo, 1e3 * *hi, 40).values;
}

bool OracleReport::all_passed() const noexcept {
  return std::all_of(items.begin(), items.end(), [](const IdentityResult& r) { return r.passed; });
}

namespace {

double rel_diff(const SymTensor3& a, const SymTensor3& b) {
  const double scale = std::max(b.frobenius(), std::numeric_limits<double>::min());
  return (a - b).frobenius() / scale;
}

double asym(const Mat3& m) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      num = std::max(num, std::abs(m[i][j] - m[j][i]));
      den = std::max(den, std::abs(m[i][j]));
    }
  return den > 0.0 ? num / den : 0.0;
}

// max positive eigenvalue of r and max negative eigenvalue of i, relative
double definiteness_violation(const SymTensor3& r, const SymTensor3& i) {
  const auto er = eigen_sym3(r).values;
  const auto ei = eigen_sym3(i).values;
  const double vr = r.frobenius() > 0.0 ? std::max(er[2], 0.0) / r.frobenius() : 0.0;
  const double vi = i.frobenius() > 0.0 ? std::max(-ei[0], 0.0) / i.frobenius() : 0.0;
  return std::max(vr, vi);
}

double bound_violation(const SymTensor3& r, const SymTensor3& i) {
  const OffDiagBoundReport rep = offdiag_bound_report(r, i);
  const double vr = r.frobenius() > 0.0 ? std::max(-rep.margin_r, 0.0) / r.frobenius() : 0.0;
  const double vi = i.frobenius() > 0.0 ? std::max(-rep.margin_i, 0.0) / i.frobenius() : 0.0;
  return std::max(vr, vi);
}

// Sign-change interval of a sampled function, -1 if none.
int crossing(const std::vector<double>& v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if ((v[k] > 0.0) != (v[k + 1] > 0.0)) return static_cast<int>(k);
  return -1;
}

struct PointViolations {
  double series = 0.0;
  double assembly = 0.0;
  double alternative = 0.0;
  double definite = 0.0;
  double bounds = 0.0;
  double symmetry = 0.0;
  double rotation = 0.0;
  double commutator = 0.0;
};

}  // namespace

OracleReport verify_identities(const SurrogateProblem& p, const std::vector<double>& nu_grid, double tol,
                               Execution exec, const std::optional<SurrogateSpectrum>& spectrum) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "verify_identities: tol must be positive");
  FrequencyGrid{nu_grid, FrequencyGrid::Kind::Nu}.validate();
  for (double nu : nu_grid)
    if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "verify_identities: grid must be strictly positive");

  const SurrogateSpectrum spec = spectrum ? *spectrum : decompose(p);
  const SpectralModel model = spectrum_model(p, spec, SymTensor3{});
  const Rotation3 q = Rotation3::about_axis({1.0, -2.0, 0.5}, 0.7 + 0.1 * static_cast<double>(p.seed % 7));
  const SurrogateProblem rotated = rotate_sources(p, q);

  // |Z_ik| <= 2 sum_{n,m} |r_n||i_m| |A_n| |A_m| <= (alpha^6 nu / 8) S_lambda S_0
  double s_lambda = 0.0, s_0 = 0.0;
  for (const Mode& m : model.modes()) {
    double c2 = 0.0;
    for (const Vec3& c : m.couplings) c2 += c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    s_lambda += m.lambda * c2;
    s_0 += c2;
  }
  const double a3 = p.alpha * p.alpha * p.alpha;
  const double z_const = a3 * a3 * s_lambda * s_0 / 8.0;

  std::vector<PointViolations> pv(nu_grid.size());
  auto point = [&](std::size_t k) {
    const double nu = nu_grid[k];
    PointViolations v;
    const auto direct = direct_theta1(p, nu);
    const auto series = series_theta1(spec, nu);
    for (int i = 0; i < 3; ++i) {
      const double scale = std::max(direct[i].norm(), std::numeric_limits<double>::min());
      v.series = std::max(v.series, (direct[i] - series[i]).norm() / scale);
    }
    const Assembly asm_ = assemble(model, nu);
    const EnergyTensors en = energy_tensors(p, direct, nu);
    v.assembly = std::max(rel_diff(asm_.r, en.r), rel_diff(asm_.i, en.i));
    const AlternativeForms alt = alternative_forms(p, direct, nu);
    v.alternative = std::max(rel_diff(SymTensor3::from_matrix(alt.r), en.r),
                             rel_diff(SymTensor3::from_matrix(alt.i), en.i));
    v.symmetry = std::max(asym(alt.r), asym(alt.i));
    v.definite = std::max(definiteness_violation(asm_.r, asm_.i), definiteness_violation(en.r, en.i));
    v.bounds = std::max(bound_violation(asm_.r, asm_.i), bound_violation(en.r, en.i));
    const EnergyTensors rot = energy_tensors_direct(rotated, nu);
    v.rotation = std::max(rel_diff(rot.r, rotate_tensor(en.r, q)), rel_diff(rot.i, rotate_tensor(en.i, q)));
    const Mat3 z = commutator_z(model, nu, nu, CommutatorKind::RI);
    double zmax = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) zmax = std::max(zmax, std::abs(z[i][j]));
    v.commutator = z_const > 0.0 ? std::max(zmax / (nu * z_const) - 1.0, 0.0) : zmax;
    pv[k] = v;
  };

  const auto n = static_cast<std::ptrdiff_t>(nu_grid.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) point(static_cast<std::size_t>(k));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) point(static_cast<std::size_t>(k));
  }

  auto max_of = [&](double PointViolations::*field) {
    double m = 0.0;
    for (const auto& v : pv) m = std::max(m, v.*field);
    return m;
  };

  OracleReport rep;
  rep.dim = p.dim;
  rep.seed = p.seed;
  rep.shape = p.shape;
  rep.grid_points = nu_grid.size();
  auto add = [&](const std::string& name, double violation) {
    rep.items.push_back({name, violation, violation <= tol});
  };
  add("series-vs-direct", max_of(&PointViolations::series));
  add("assembly-vs-energy", max_of(&PointViolations::assembly));
  add("energy-vs-alternative", max_of(&PointViolations::alternative));
  add("definiteness", max_of(&PointViolations::definite));
  add("offdiag-bounds", max_of(&PointViolations::bounds));
  add("symmetry", max_of(&PointViolations::symmetry));
  add("rotation-equivariance", max_of(&PointViolations::rotation));

  // Single-mode coincidence of the R inflection and the I stationary point,
  // at nu = lambda and on the grid.
  double inflection = 0.0;
  for (std::size_t m = 0; m < model.size(); ++m) {
    const SpectralModel single = single_mode_model(model, m);
    const double lam = model.modes()[m].lambda;
    const AssemblyLogDerivatives d = assemble_dlog(single, lam);
    for (int i = 0; i < 3; ++i) {
      const double scale = std::abs(d.d_r(i, i));
      if (scale == 0.0) continue;
      inflection = std::max({inflection, std::abs(d.d2_r(i, i)) / scale, std::abs(d.d_i(i, i)) / scale});
    }
    if (m == 0) {
      std::vector<double> d2r, di;
      for (double nu : nu_grid) {
        const AssemblyLogDerivatives g = assemble_dlog(single, nu);
        d2r.push_back(g.d2_r(0, 0));
        di.push_back(g.d_i(0, 0));
      }
      if (single.modes()[0].couplings.size() > 0 && crossing(d2r) != crossing(di)) inflection = 1.0;
    }
  }
  add("inflection-stationary", inflection);

  // Single-mode commutators vanish.
  double single_z = 0.0;
  for (std::size_t m = 0; m < model.size(); ++m) {
    const SpectralModel single = single_mode_model(model, m);
    for (double nu : {0.5 * model.modes()[m].lambda, 2.0 * model.modes()[m].lambda}) {
      const Assembly a = assemble(single, nu);
      const double scale = a.r.frobenius() * a.i.frobenius();
      if (scale == 0.0) continue;
      for (CommutatorKind kind : {CommutatorKind::RI, CommutatorKind::RR, CommutatorKind::II}) {
        const Mat3 z = commutator_z(single, nu, 3.0 * nu, kind);
        for (const auto& row : z)
          for (double x : row) single_z = std::max(single_z, std::abs(x) / scale);
      }
    }
  }
  add("commutator-single-mode", single_z);
  add("commutator-bound", max_of(&PointViolations::commutator));

  // N0 + sum A against the direct evaluation far above the spectrum.
  const LimitTensors lim = limit_tensors(model);
  const double nu_huge = 1e8 * spec.values.maxCoeff();
  const EnergyTensors far = energy_tensors_direct(p, nu_huge);
  add("limit-identity", rel_diff(model.n0() + far.r, lim.m_inf));
  return rep;
}

}  // namespace mpt
