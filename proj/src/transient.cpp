#include "mpt/transient.hpp"

#include <algorithm>
#include <cmath>

namespace mpt {

SymTensor3 TransientKernel::smooth(double t) const {
  SymTensor3 out;
  if (t < 0.0) return out;
  out = steady;
  for (const auto& [s, b] : exp_terms) out += std::exp(s * t) * b;
  return out;
}

TransientKernel make_step_kernel(const SpectralModel& model) {
  TransientKernel k;
  k.steady = model.n0();
  for (std::size_t n = 0; n < model.size(); ++n) {
    if (model.modes()[n].dark) continue;
    k.exp_terms.emplace_back(-model.modes()[n].lambda / model.time_scale(), mode_tensor(model, n));
  }
  return k;
}

TransientKernel make_impulse_kernel(const SpectralModel& model) {
  TransientKernel k;
  k.delta_part = limit_tensors(model).m_inf;
  for (std::size_t n = 0; n < model.size(); ++n) {
    if (model.modes()[n].dark) continue;
    const double s = -model.modes()[n].lambda / model.time_scale();
    k.exp_terms.emplace_back(s, s * mode_tensor(model, n));
  }
  return k;
}

SymTensor3 step_kernel(const SpectralModel& model, double t) { return make_step_kernel(model).smooth(t); }

ImpulseValue impulse_kernel(const SpectralModel& model, double t) {
  if (t < 0.0) return {};
  const TransientKernel k = make_impulse_kernel(model);
  return {k.delta_part, k.smooth(t)};
}

double kernel_tail_bound(const SpectralModel& model) noexcept { return model.tail_bound().value_or(0.0); }

void Waveform::validate() const {
  if (times.empty() || times.size() != values.size())
    throw Error(ErrorKind::InvalidInput, "waveform needs matching, non-empty times and values");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || !std::isfinite(values[k]))
      throw Error(ErrorKind::InvalidInput, "waveform samples must be finite");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw Error(ErrorKind::InvalidInput, "waveform times must be strictly increasing");
  }
}

double Waveform::operator()(double t) const {
  if (t < times.front()) return 0.0;
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  const double f = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + f * (values[k] - values[k - 1]);
}

namespace {

// (x e^x - expm1(x)) / x
double ramp_factor(double x) {
  if (std::abs(x) < 0.5) {
    // sum_{k>=2} (k-1)/k! x^(k-1)
    double term = 1.0;  // x^(k-1)/k! at k = 1
    double sum = 0.0;
    for (int k = 2; k < 30; ++k) {
      term *= x / k;
      sum += (k - 1) * term;
    }
    return sum;
  }
  return (x * std::exp(x) - std::expm1(x)) / x;
}

// integral of s e^{s(t - tau)} e(tau) dtau over the excitation history up to t
double exp_history(double s, const Waveform& wf, double t) {
  double acc = 0.0;
  const auto& tm = wf.times;
  const auto& v = wf.values;
  for (std::size_t k = 0; k + 1 < tm.size() && tm[k] < t; ++k) {
    const double end = std::min(tm[k + 1], t);
    const double slope = (v[k + 1] - v[k]) / (tm[k + 1] - tm[k]);
    const double delta = end - tm[k];
    const double e_end = v[k] + slope * delta;
    const double x = s * delta;
    acc += std::exp(s * (t - end)) * (e_end * std::expm1(x) - slope * delta * ramp_factor(x));
  }
  if (t > tm.back()) acc += v.back() * std::expm1(s * (t - tm.back()));
  return acc;
}

SymTensor3 convolve_at(const TransientKernel& imp, const std::vector<std::pair<double, SymTensor3>>& modes,
                       const Waveform& wf, double t) {
  SymTensor3 out;
  if (t < wf.times.front()) return out;
  out = wf(t) * imp.delta_part;
  for (const auto& [s, a] : modes) out += exp_history(s, wf, t) * a;
  return out;
}

}  // namespace

std::vector<SymTensor3> convolve_excitation(const SpectralModel& model, const Waveform& excitation,
                                            const std::vector<double>& query_times, Execution exec) {
  excitation.validate();
  for (std::size_t k = 0; k < query_times.size(); ++k) {
    if (!std::isfinite(query_times[k])) throw Error(ErrorKind::InvalidInput, "query times must be finite");
    if (k > 0 && query_times[k] < query_times[k - 1])
      throw Error(ErrorKind::InvalidInput, "query times must be ordered");
  }
  const TransientKernel imp = make_impulse_kernel(model);
  const TransientKernel step = make_step_kernel(model);  // exp_terms carry (s_n, A_n)

  std::vector<SymTensor3> out(query_times.size());
  const auto n = static_cast<std::ptrdiff_t>(query_times.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = convolve_at(imp, step.exp_terms, excitation, query_times[k]);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = convolve_at(imp, step.exp_terms, excitation, query_times[k]);
  }
  return out;
}

TransientField transient_field(const Vec3& x, const Vec3& z, const SpectralModel& model, const Vec3& h0_at_z,
                               ExcitationKind kind, double t) {
  const SymTensor3 g = dipole_green_hessian(x, z);
  TransientField out;
  if (t < 0.0) return out;
  if (kind == ExcitationKind::Step) {
    out.field = matvec(g, matvec(step_kernel(model, t), h0_at_z));
  } else {
    const ImpulseValue v = impulse_kernel(model, t);
    out.field = matvec(g, matvec(v.smooth, h0_at_z));
    out.delta_part = matvec(g, matvec(v.delta_coeff, h0_at_z));
  }
  return out;
}

}  // namespace mpt
