#include <benchmark/benchmark.h>

#include "subflow/ctrw.hpp"

using namespace subflow;

namespace {

void BM_HittingTimes(benchmark::State& state) {
  const CtrwConfig cfg{BernsteinSpec::stable(0.5), 1.0 / static_cast<double>(state.range(0)), 1.0,
                       1000, 7};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_samples(cfg, Process::Hitting, {1.0}));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_HittingTimes)->Arg(100)->Arg(10000);

void BM_TemperedJumps(benchmark::State& state) {
  const JumpSampler sampler(BernsteinSpec::tempered(0.5, 1.0), 1e-4);
  Rng rng(1, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(rng));
}
BENCHMARK(BM_TemperedJumps);

}  // namespace

BENCHMARK_MAIN();
