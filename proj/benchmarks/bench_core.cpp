#include <numbers>

#include "benchmark/benchmark.h"

#include "trispin/resonance.hpp"

using namespace trispin;

namespace {

DeviceLabel dl(int tm1, int s23, int m23) {
  return DeviceLabel{tm1, 2 * s23, 2 * m23, std::nullopt};
}

const ModelParams kParams =
    ModelParams::anisotropic(SpinQuantum(1.0), -0.05, -0.40, -0.0288, -0.60, 0.05);

void BM_BuildEffectiveHamiltonian(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_effective_hamiltonian(kParams));
}
BENCHMARK(BM_BuildEffectiveHamiltonian);

void BM_BuildFullHamiltonian(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_full_hamiltonian(kParams));
}
BENCHMARK(BM_BuildFullHamiltonian);

void BM_EigHermitian18(benchmark::State& state) {
  const Mat h = build_effective_hamiltonian(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h));
}
BENCHMARK(BM_EigHermitian18);

void BM_Propagator18(benchmark::State& state) {
  const Eigensystem es = eig_hermitian(build_effective_hamiltonian(kParams));
  double t = 0.0;
  for (auto _ : state) {
    t += 0.1;
    benchmark::DoNotOptimize(es.propagator(t));
  }
}
BENCHMARK(BM_Propagator18);

void BM_Evolve2000Steps(benchmark::State& state) {
  const Mat h = build_effective_hamiltonian(kParams);
  const DeviceBasis basis = DeviceBasis::spin_space(kParams.s23);
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(18, basis.index_of(dl(-1, 2, 2)));
  const std::vector<double> times = linspace(0.0, 3.0 * std::numbers::pi / 0.4, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(h, rho0, times));
}
BENCHMARK(BM_Evolve2000Steps);

void BM_MaxTransitionProbability(benchmark::State& state) {
  const Mat h = build_effective_hamiltonian(kParams);
  const DeviceBasis basis = DeviceBasis::spin_space(kParams.s23);
  for (auto _ : state)
    benchmark::DoNotOptimize(max_transition_probability(
        h, basis, dl(-1, 2, 2), dl(+1, 2, 1), 3.0 * std::numbers::pi / 0.4, 2000));
}
BENCHMARK(BM_MaxTransitionProbability);

}  // namespace

BENCHMARK_MAIN();
