#include <benchmark/benchmark.h>

#include "dynroute/two_stage.hpp"

namespace {

using namespace dynroute;

GameParams forty_agents() {
  GameParams p;
  p.n = 40;
  p.s0 = 10;
  p.s1 = 1;
  p.l = 0.9;
  p.h = 150;
  return p;
}

void BM_Thresholds(benchmark::State& state) {
  const auto p = forty_agents();
  for (auto _ : state) benchmark::DoNotOptimize(two_stage::thresholds(p));
}
BENCHMARK(BM_Thresholds);

void BM_SolveOptimalScheme(benchmark::State& state) {
  auto p = forty_agents();
  p.n = static_cast<int>(state.range(0));
  p.h = 3.0 * (p.s0 + p.s1 * p.n);  // keeps the prior inside the gate as n grows
  for (auto _ : state) benchmark::DoNotOptimize(two_stage::solve_optimal_scheme(Belief(0.6), p));
}
BENCHMARK(BM_SolveOptimalScheme)->Arg(10)->Arg(40)->Arg(100);

void BM_BruteForceEquilibrium(benchmark::State& state) {
  GameParams p;
  p.n = static_cast<int>(state.range(0));
  p.s0 = 10;
  p.s1 = 1;
  p.l = 0.8 * (p.s0 + p.s1) / p.n;
  p.h = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_stage::brute_force_equilibrium(p, Belief(0.3), two_stage::InfoRegime::Private));
  }
}
BENCHMARK(BM_BruteForceEquilibrium)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
