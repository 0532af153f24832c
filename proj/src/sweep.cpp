#include "mpt/sweep.hpp"

#include <cmath>

namespace mpt {

std::vector<Assembly> sweep(const SpectralModel& model, std::span<const double> nu, Execution exec) {
  for (double v : nu)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::Domain, "sweep: nu must be finite and non-negative");
  std::vector<Assembly> out(nu.size());
  const auto n = static_cast<std::ptrdiff_t>(nu.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = assemble(model, nu[k]);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = assemble(model, nu[k]);
  }
  return out;
}

}  // namespace mpt
