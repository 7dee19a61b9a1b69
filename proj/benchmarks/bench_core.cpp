#include <benchmark/benchmark.h>

#include <cstdint>

#include "sff/ensemble.hpp"
#include "sff/models.hpp"
#include "sff/rng.hpp"
#include "sff/stats.hpp"

namespace {

void BM_SampleCue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) {
    const sff::RngStream rng{42, index++};
    benchmark::DoNotOptimize(sff::sample_cue(n, rng));
  }
}
BENCHMARK(BM_SampleCue)->Arg(32)->Arg(128)->Arg(512);

void BM_BuildRmte(benchmark::State& state) {
  sff::RmteParams params;
  params.N = static_cast<int>(state.range(0));
  params.eps = 0.1;
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sff::build_rmte(params, sff::RngStream{42, index++}));
  }
}
BENCHMARK(BM_BuildRmte)->Arg(16)->Arg(24)->Arg(32);

void BM_EigenphasesCayley(benchmark::State& state) {
  sff::RmteParams params;
  params.N = static_cast<int>(state.range(0));
  params.eps = 0.1;
  const sff::FloquetOperator op = sff::build_rmte(params, sff::RngStream{7, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sff::eigenphases(op, sff::EigenSolver::CayleyHermitian));
  }
}
BENCHMARK(BM_EigenphasesCayley)->Arg(16)->Arg(24)->Arg(32);

void BM_EigenphasesDenseQr(benchmark::State& state) {
  sff::RmteParams params;
  params.N = static_cast<int>(state.range(0));
  params.eps = 0.1;
  const sff::FloquetOperator op = sff::build_rmte(params, sff::RngStream{7, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sff::eigenphases(op, sff::EigenSolver::DenseQr));
  }
}
BENCHMARK(BM_EigenphasesDenseQr)->Arg(16)->Arg(24)->Arg(32);

void BM_TracePowersGrid(benchmark::State& state) {
  sff::RmteParams params;
  params.N = static_cast<int>(state.range(0));
  params.eps = 0.1;
  const sff::FloquetOperator op = sff::build_rmte(params, sff::RngStream{7, 1});
  const sff::EigenphaseSet phases = sff::eigenphases(op);
  const std::int64_t dim = op.dim();
  const sff::TimeGrid grid = sff::make_time_grid(4 * dim, 4 * params.N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sff::trace_powers(phases, grid, 3));
  }
}
BENCHMARK(BM_TracePowersGrid)->Arg(16)->Arg(32);

void BM_KickedRotorPair(benchmark::State& state) {
  sff::KickedRotorParams params;
  params.N = static_cast<int>(state.range(0));
  params.gamma = 0.1;
  const sff::BlochPhases bloch{0.13, 0.29, 0.61, 0.83};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sff::build_kicked_rotor_pair(params, bloch));
  }
}
BENCHMARK(BM_KickedRotorPair)->Arg(20)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
