#pragma once

// Frequency sweeps over a grid of nu values. Parallel evaluation splits the
// grid across OpenMP threads; each point is computed exactly as in the serial
// loop, so both paths give bitwise-identical output.

#include <span>
#include <vector>

#include "mpt/spectral_model.hpp"

namespace mpt {

enum class Execution { Serial, Parallel };

std::vector<Assembly> sweep(const SpectralModel& model, std::span<const double> nu,
                            Execution exec = Execution::Parallel);

}  // namespace mpt
