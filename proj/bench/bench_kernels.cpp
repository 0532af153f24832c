// Serial reference vs OpenMP path for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "mpt/oracle.hpp"
#include "mpt/sphere.hpp"
#include "mpt/sweep.hpp"
#include "mpt/transient.hpp"

namespace {

using mpt::Execution;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

const mpt::SpectralModel& sphere_model() {
  static const mpt::SpectralModel m = mpt::sphere_spectral_model(mpt::SphereSpec{}, 200);
  return m;
}

void BM_Sweep(benchmark::State& state) {
  const auto nu = mpt::FrequencyGrid::logarithmic(1e-3, 1e6, 20000).values;
  for (auto _ : state) benchmark::DoNotOptimize(mpt::sweep(sphere_model(), nu, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(nu.size()));
}

void BM_Convolve(benchmark::State& state) {
  mpt::Waveform w;
  for (int k = 0; k < 200; ++k) {
    w.times.push_back(5e-6 * k);
    w.values.push_back(std::sin(0.05 * k));
  }
  std::vector<double> q;
  for (int k = 0; k < 2000; ++k) q.push_back(5e-7 * k);
  for (auto _ : state) benchmark::DoNotOptimize(mpt::convolve_excitation(sphere_model(), w, q, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(q.size()));
}

void BM_Oracle(benchmark::State& state) {
  const mpt::SurrogateProblem p = mpt::generate(60, 3, mpt::SpectrumShape::Quadratic);
  const auto grid = mpt::default_oracle_grid(p);
  for (auto _ : state) benchmark::DoNotOptimize(mpt::verify_identities(p, grid, 1e-9, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Sweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convolve)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
