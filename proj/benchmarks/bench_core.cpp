#include <benchmark/benchmark.h>

#include "measuretherm/operators.hpp"
#include "measuretherm/poisson.hpp"
#include "measuretherm/random_states.hpp"
#include "measuretherm/superselection.hpp"
#include "measuretherm/work.hpp"

namespace {

using namespace measuretherm;

void BM_Dephase(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  SplitMix64 rng(7);
  const DensityMatrix rho = random_density(dim, rng);
  const ProjectorFamily family = ProjectorFamily::blocks({dim / 2, dim - dim / 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(dephase(rho, family));
  }
}
BENCHMARK(BM_Dephase)->Arg(8)->Arg(32)->Arg(64);

void BM_UnitaryEvolve(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  SplitMix64 rng(11);
  const DensityMatrix rho = random_density(dim, rng);
  const HermitianOperator h = random_hermitian(dim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(unitary_evolve(rho, h, 0.3));
  }
}
BENCHMARK(BM_UnitaryEvolve)->Arg(8)->Arg(32)->Arg(64);

void BM_WorkDistribution(benchmark::State& state) {
  SplitMix64 rng(13);
  DrivingProtocol protocol;
  protocol.step = 0.05;
  protocol.beta = 1.0;
  for (int k = 0; k <= static_cast<int>(state.range(0)); ++k) {
    protocol.hamiltonians.push_back(random_hermitian(8, rng));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(work_distribution(protocol));
  }
}
BENCHMARK(BM_WorkDistribution)->Arg(50)->Arg(200);

void BM_OffdiagonalKernel(benchmark::State& state) {
  const SectorField field = make_gaussian_field(
      {Complex(0.6, 0.0), Complex(0.8, 0.0)}, {0.0, 1.0}, 1.0,
      static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(offdiagonal_kernel(field, 0, 1, 5.0));
  }
}
BENCHMARK(BM_OffdiagonalKernel)->Arg(4001)->Arg(16001);

void BM_EnsembleStep(benchmark::State& state) {
  SplitMix64 rng(17);
  CVector psi(2);
  psi << Complex(M_SQRT1_2, 0.0), Complex(M_SQRT1_2, 0.0);
  const DensityMatrix initial = DensityMatrix::pure(psi);
  for (auto _ : state) {
    state.PauseTiming();
    EnlargedEnsemble ens = make_ensemble(initial, static_cast<std::size_t>(state.range(0)), 1.0,
                                         ProjectorFamily::computational_basis(2), rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(evolve_ensemble(ens, {0.0, 0.5, 1.0}));
  }
}
BENCHMARK(BM_EnsembleStep)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
