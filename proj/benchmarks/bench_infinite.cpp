#include <benchmark/benchmark.h>

#include "dynroute/infinite.hpp"
#include "dynroute/linear_oracle.hpp"

namespace {

using namespace dynroute;

GameParams reference(int n) {
  GameParams p;
  p.n = n;
  p.s0 = 10;
  p.s1 = 0;
  p.l = 1;
  p.h = 19;
  p.gamma_l = 0.1;
  p.gamma_h = 0.5;
  p.delta = 0.5;
  return p;
}

void BM_StateCosts(benchmark::State& state) {
  const auto p = reference(10);
  for (auto _ : state) benchmark::DoNotOptimize(infinite::state_costs({2, 3}, p));
}
BENCHMARK(BM_StateCosts);

void BM_LinearOracle(benchmark::State& state) {
  const auto p = reference(10);
  for (auto _ : state) benchmark::DoNotOptimize(linear_oracle::agent_values({2, 3}, p));
}
BENCHMARK(BM_LinearOracle);

void BM_CheckIC(benchmark::State& state) {
  const auto p = reference(10);
  for (auto _ : state) benchmark::DoNotOptimize(infinite::check_ic({2, 3}, p));
}
BENCHMARK(BM_CheckIC);

void BM_SchemeSearch(benchmark::State& state) {
  const auto p = reference(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(infinite::optimal_scheme_search(p));
}
BENCHMARK(BM_SchemeSearch)->Arg(10)->Arg(30);

}  // namespace
