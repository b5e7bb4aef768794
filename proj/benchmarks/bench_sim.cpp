#include <benchmark/benchmark.h>

#include "dynroute/sim.hpp"

namespace {

using namespace dynroute;

GameParams reference() {
  GameParams p;
  p.n = 10;
  p.s0 = 10;
  p.l = 1;
  p.h = 19;
  p.gamma_l = 0.1;
  p.gamma_h = 0.5;
  p.delta = 0.5;
  return p;
}

void BM_SchemeTrial(benchmark::State& state) {
  const auto p = reference();
  const sim::SimConfig cfg{static_cast<int>(state.range(0)), 1, 1};
  long trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_scheme_trial({2, 3}, p, cfg, trial++));
}
BENCHMARK(BM_SchemeTrial)->Arg(15)->Arg(100);

void BM_RunScheme(benchmark::State& state) {
  const auto p = reference();
  const sim::SimConfig cfg{15, 1000, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_scheme({2, 3}, p, cfg));
}
BENCHMARK(BM_RunScheme)->Unit(benchmark::kMillisecond);

}  // namespace
