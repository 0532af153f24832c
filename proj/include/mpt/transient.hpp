#pragma once

// Time-domain kernels for step and impulse excitation, t in seconds.
//
//   step:    (N0 + sum_n exp(s_n t) A_n) u(t)
//   impulse: M(inf) delta(t) + sum_n s_n exp(s_n t) A_n u(t)
//
// The Laplace transform of the impulse kernel at p = i omega equals the
// complex conjugate of the assembled M(omega).

#include <utility>
#include <vector>

#include "mpt/spectral_model.hpp"
#include "mpt/sweep.hpp"

namespace mpt {

struct TransientKernel {
  SymTensor3 steady;
  SymTensor3 delta_part;
  std::vector<std::pair<double, SymTensor3>> exp_terms;  // (s_n, B_n)

  /// Smooth part at t: zero for t < 0.
  SymTensor3 smooth(double t) const;
};

TransientKernel make_step_kernel(const SpectralModel& model);
TransientKernel make_impulse_kernel(const SpectralModel& model);

SymTensor3 step_kernel(const SpectralModel& model, double t);

struct ImpulseValue {
  SymTensor3 delta_coeff;
  SymTensor3 smooth;
};

ImpulseValue impulse_kernel(const SpectralModel& model, double t);

/// Worst-case kernel error from the truncated tail, i.e. the stored tail bound
/// (0 when none was supplied).
double kernel_tail_bound(const SpectralModel& model) noexcept;

/// Piecewise-linear excitation: zero before times.front(), linear between
/// samples, held at values.back() after times.back().
struct Waveform {
  std::vector<double> times;
  std::vector<double> values;

  void validate() const;
  double operator()(double t) const;
};

/// (M_imp * e)(t) integrated exactly against the piecewise-linear waveform.
std::vector<SymTensor3> convolve_excitation(const SpectralModel& model, const Waveform& excitation,
                                            const std::vector<double>& query_times,
                                            Execution exec = Execution::Parallel);

enum class ExcitationKind { Step, Impulse };

struct TransientField {
  Vec3 field{};
  Vec3 delta_part{};  // coefficient of delta(t); impulse only
};

TransientField transient_field(const Vec3& x, const Vec3& z, const SpectralModel& model, const Vec3& h0_at_z,
                               ExcitationKind kind, double t);

}  // namespace mpt
