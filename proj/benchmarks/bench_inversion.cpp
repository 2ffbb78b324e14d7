#include <benchmark/benchmark.h>

#include "subflow/laplace.hpp"

using namespace subflow;

namespace {

void BM_TalbotDensity(benchmark::State& state) {
  const auto spec = BernsteinSpec::tempered(0.5, 1.0);
  InversionConfig cfg;
  cfg.method = InversionMethod::Talbot;
  cfg.cross_check = false;
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subordinator_density(spec, 1.0, x, cfg));
    x = x < 5.0 ? x + 0.01 : 0.5;
  }
}
BENCHMARK(BM_TalbotDensity);

void BM_StehfestDensity(benchmark::State& state) {
  const auto spec = BernsteinSpec::tempered(0.5, 1.0);
  InversionConfig cfg;
  cfg.method = InversionMethod::GaverStehfest;
  cfg.cross_check = false;
  cfg.n_terms = static_cast<int>(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subordinator_density(spec, 1.0, x, cfg));
    x = x < 5.0 ? x + 0.01 : 0.5;
  }
}
BENCHMARK(BM_StehfestDensity)->Arg(12)->Arg(24)->Arg(40);

void BM_CrossCheckedInverseDensity(benchmark::State& state) {
  const auto spec = BernsteinSpec::stable(0.5);
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_density(spec, 1.0, s));
    s = s < 3.0 ? s + 0.01 : 0.1;
  }
}
BENCHMARK(BM_CrossCheckedInverseDensity);

}  // namespace

BENCHMARK_MAIN();
