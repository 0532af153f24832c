#include "mpt/spectral_model.hpp"

#include <algorithm>
#include <cmath>

namespace mpt {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::SphereAnalytic: return "sphere-analytic";
    case Provenance::Surrogate: return "surrogate";
    case Provenance::External: return "external";
    case Provenance::Manual: return "manual";
  }
  return "manual";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "sphere-analytic") return Provenance::SphereAnalytic;
  if (s == "surrogate") return Provenance::Surrogate;
  if (s == "external") return Provenance::External;
  if (s == "manual") return Provenance::Manual;
  throw Error(ErrorKind::Schema, "unknown provenance '" + s + "'");
}

namespace {

bool all_zero(const Vec3& c) { return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0; }

void validate_mode(const Mode& mode, std::size_t index) {
  const std::string where = "mode " + std::to_string(index);
  if (!(mode.lambda > 0.0) || !std::isfinite(mode.lambda))
    throw Error(ErrorKind::InvalidMode, where + ": lambda must be positive and finite");
  if (mode.couplings.empty()) throw Error(ErrorKind::InvalidMode, where + ": multiplicity must be >= 1");
  bool any_nonzero = false;
  for (const Vec3& c : mode.couplings) {
    for (double x : c)
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidMode, where + ": non-finite coupling");
    any_nonzero = any_nonzero || !all_zero(c);
  }
  if (!any_nonzero && !mode.dark)
    throw Error(ErrorKind::InvalidMode, where + ": all couplings zero but mode not marked dark");
}

}  // namespace

SpectralModel::SpectralModel(double alpha, double sigma_star, SymTensor3 n0, std::vector<Mode> modes,
                             Provenance provenance, std::optional<std::string> topology,
                             std::optional<double> tail_bound)
    : alpha_(alpha),
      sigma_star_(sigma_star),
      n0_(n0),
      modes_(std::move(modes)),
      provenance_(provenance),
      topology_(std::move(topology)),
      tail_bound_(tail_bound) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw Error(ErrorKind::InvalidInput, "alpha must be positive");
  if (!(sigma_star_ > 0.0) || !std::isfinite(sigma_star_))
    throw Error(ErrorKind::InvalidInput, "sigma_star must be positive");
  if (!n0_.finite()) throw Error(ErrorKind::InvalidInput, "N0 must be finite");
  if (tail_bound_ && (!(*tail_bound_ >= 0.0) || !std::isfinite(*tail_bound_)))
    throw Error(ErrorKind::InvalidInput, "tail_bound must be finite and non-negative");
  for (std::size_t n = 0; n < modes_.size(); ++n) {
    validate_mode(modes_[n], n);
    if (n > 0 && !(modes_[n].lambda > modes_[n - 1].lambda))
      throw Error(ErrorKind::InvalidMode, "mode eigenvalues must be strictly increasing (merge equal ones)");
  }
}

std::vector<Mode> merge_eigenpairs(std::span<const double> lambdas, std::span<const Vec3> couplings,
                                   double rel_gap) {
  if (lambdas.size() != couplings.size())
    throw Error(ErrorKind::InvalidInput, "merge_eigenpairs: one coupling row per eigenvalue required");
  std::vector<Mode> modes;
  std::size_t start = 0;
  while (start < lambdas.size()) {
    std::size_t end = start + 1;
    while (end < lambdas.size() && (lambdas[end] - lambdas[end - 1]) < rel_gap * std::abs(lambdas[end])) ++end;
    Mode m;
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      sum += lambdas[k];
      m.couplings.push_back(couplings[k]);
    }
    m.lambda = sum / static_cast<double>(end - start);
    m.dark = std::all_of(m.couplings.begin(), m.couplings.end(), all_zero);
    modes.push_back(std::move(m));
    start = end;
  }
  return modes;
}

void FrequencyGrid::validate() const {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < 0.0)
      throw Error(ErrorKind::InvalidInput, "frequency grid values must be finite and non-negative");
    if (k > 0 && !(values[k] > values[k - 1]))
      throw Error(ErrorKind::InvalidInput, "frequency grid must be strictly increasing");
  }
}

std::vector<double> FrequencyGrid::to_nu(const SpectralModel& model) const {
  validate();
  if (kind == Kind::Nu) return values;
  std::vector<double> nu(values.size());
  std::transform(values.begin(), values.end(), nu.begin(), [&](double w) { return model.nu_from_omega(w); });
  return nu;
}

FrequencyGrid FrequencyGrid::linear(double lo, double hi, std::size_t n, Kind kind) {
  if (n < 2 || !(hi > lo)) throw Error(ErrorKind::InvalidInput, "linear grid needs n >= 2 and hi > lo");
  FrequencyGrid g{std::vector<double>(n), kind};
  for (std::size_t k = 0; k < n; ++k) g.values[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  g.values.back() = hi;
  g.validate();
  return g;
}

FrequencyGrid FrequencyGrid::logarithmic(double lo, double hi, std::size_t n, Kind kind) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo))
    throw Error(ErrorKind::InvalidInput, "log grid needs n >= 2 and 0 < lo < hi");
  FrequencyGrid g{std::vector<double>(n), kind};
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < n; ++k)
    g.values[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  g.values.front() = lo;
  g.values.back() = hi;
  g.validate();
  return g;
}

std::complex<double> beta(double nu, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidMode, "beta: lambda must be positive");
  if (!(nu >= 0.0)) throw Error(ErrorKind::Domain, "beta: nu must be non-negative");
  if (std::isinf(nu)) return {-1.0, 0.0};
  // Written via the real/imaginary closed forms to avoid complex division.
  const double x = nu / lambda;
  const double den = x * x + 1.0;
  return {-(x * x) / den, x / den};
}

BetaLogDerivatives beta_dlog(double nu, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidMode, "beta_dlog: lambda must be positive");
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "beta_dlog: log-derivative undefined at nu <= 0");
  const double x = nu / lambda;
  const double den = x * x + 1.0;
  const double im = x / den;
  BetaLogDerivatives d;
  d.d_re = -2.0 * im * im;
  d.d2_re = -4.0 * x * x * (1.0 - x * x) / (den * den * den);
  d.d_im = x * (1.0 - x * x) / (den * den);
  return d;
}

SymTensor3 mode_tensor(const SpectralModel& model, std::size_t n) {
  if (n >= model.size())
    throw Error(ErrorKind::IndexOutOfRange, "mode index " + std::to_string(n) + " of " + std::to_string(model.size()));
  const Mode& mode = model.modes()[n];
  SymTensor3 ctc;
  for (const Vec3& c : mode.couplings) ctc += SymTensor3::outer(c, c);
  const double a = model.alpha();
  return (-(a * a * a) * mode.lambda / 4.0) * ctc;
}

Assembly assemble(const SpectralModel& model, double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorKind::Domain, "assemble: nu must be non-negative");
  Assembly out;
  for (std::size_t n = 0; n < model.size(); ++n) {
    const Mode& mode = model.modes()[n];
    if (mode.dark) continue;
    const std::complex<double> b = beta(nu, mode.lambda);
    const SymTensor3 a = mode_tensor(model, n);
    out.r += (-b.real()) * a;
    out.i += (-b.imag()) * a;
  }
  out.m.real = model.n0() + out.r;
  out.m.imag = out.i;
  return out;
}

AssemblyLogDerivatives assemble_dlog(const SpectralModel& model, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "assemble_dlog: nu must be positive");
  AssemblyLogDerivatives out;
  for (std::size_t n = 0; n < model.size(); ++n) {
    const Mode& mode = model.modes()[n];
    if (mode.dark) continue;
    const BetaLogDerivatives d = beta_dlog(nu, mode.lambda);
    const SymTensor3 a = mode_tensor(model, n);
    out.d_r += (-d.d_re) * a;
    out.d2_r += (-d.d2_re) * a;
    out.d_i += (-d.d_im) * a;
  }
  return out;
}

LimitTensors limit_tensors(const SpectralModel& model) {
  LimitTensors lt{model.n0(), model.n0()};
  for (std::size_t n = 0; n < model.size(); ++n)
    if (!model.modes()[n].dark) lt.m_inf += mode_tensor(model, n);
  return lt;
}

std::size_t dominant_mode(const SpectralModel& model, int i, int j, double nu_max) {
  if (!(nu_max > 0.0)) throw Error(ErrorKind::Domain, "dominant_mode: nu_max must be positive");
  if (i < 0 || i > 2 || j < 0 || j > 2) throw Error(ErrorKind::IndexOutOfRange, "tensor index out of range");
  double best = 0.0;
  std::size_t best_n = 0;
  for (std::size_t n = 0; n < model.size(); ++n) {
    const Mode& mode = model.modes()[n];
    if (mode.dark) continue;
    const double peak_nu = std::min(mode.lambda, nu_max);
    const double score = beta(peak_nu, mode.lambda).imag() * std::abs(mode_tensor(model, n)(i, j));
    if (score > best) {
      best = score;
      best_n = n;
    }
  }
  if (!(best > 0.0)) throw Error(ErrorKind::NoDominantMode, "every mode contributes zero to this coefficient");
  return best_n;
}

namespace {

Mat3 commutator(const Mat3& a, const Mat3& b) {
  const Mat3 ab = matmul(a, b), ba = matmul(b, a);
  Mat3 z{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) z[r][c] = ab[r][c] - ba[r][c];
  return z;
}

}  // namespace

Mat3 commutator_z(const SpectralModel& model, double nu1, double nu2, CommutatorKind kind) {
  switch (kind) {
    case CommutatorKind::RI: {
      const Assembly s = assemble(model, nu1);
      return commutator(s.r.matrix(), s.i.matrix());
    }
    case CommutatorKind::RR:
      return commutator(assemble(model, nu1).r.matrix(), assemble(model, nu2).r.matrix());
    case CommutatorKind::II:
      return commutator(assemble(model, nu1).i.matrix(), assemble(model, nu2).i.matrix());
  }
  return {};
}

CommutatorKind commutator_kind_from_string(const std::string& s) {
  if (s == "RI") return CommutatorKind::RI;
  if (s == "RR") return CommutatorKind::RR;
  if (s == "II") return CommutatorKind::II;
  throw Error(ErrorKind::InvalidInput, "commutator kind must be RI, RR or II");
}

SpectralModel rotate_model(const SpectralModel& model, const Rotation3& q) {
  std::vector<Mode> modes = model.modes();
  for (Mode& m : modes)
    for (Vec3& c : m.couplings) c = q.apply(c);
  return SpectralModel(model.alpha(), model.sigma_star(), rotate_tensor(model.n0(), q), std::move(modes),
                       model.provenance(), model.topology(), model.tail_bound());
}

SpectralModel single_mode_model(const SpectralModel& model, std::size_t n) {
  if (n >= model.size()) throw Error(ErrorKind::IndexOutOfRange, "single_mode_model: index out of range");
  return SpectralModel(model.alpha(), model.sigma_star(), model.n0(), {model.modes()[n]}, model.provenance(),
                       model.topology());
}

}  // namespace mpt
