#include <benchmark/benchmark.h>

#include <cmath>

#include "subflow/calculus.hpp"

using namespace subflow;

namespace {

void BM_Caputo(benchmark::State& state) {
  const auto spec = BernsteinSpec::tempered(0.5, 1.0);
  const auto u = GridFunction::sample([](double t) { return std::sin(t); }, 0.0, 1.0,
                                      static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(caputo_derivative(spec, u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Caputo)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_WeylMinus(benchmark::State& state) {
  const auto spec = BernsteinSpec::tempered(0.5, 1.0);
  const auto u = GridFunction::sample([](double x) { return std::exp(-x * x); }, -20.0, 20.0,
                                      static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_derivative(spec, u, WeylDirection::Minus));
}
BENCHMARK(BM_WeylMinus)->Arg(1001)->Arg(4001);

}  // namespace

BENCHMARK_MAIN();
