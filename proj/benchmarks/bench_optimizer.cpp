#include <benchmark/benchmark.h>

#include "case_study.hpp"
#include "wrrnc/optimizer.hpp"

namespace {

using namespace wrrnc;
using namespace wrrnc::testing;

void BM_OptimizeIterative(benchmark::State& state) {
  const Topology t = case_study_topology();
  const FlowSpec f = control_flow();
  OptimizerSettings s;
  s.w2 = {1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(optimize(t, f, s));
}
BENCHMARK(BM_OptimizeIterative);

// Exhaustive search with w2 ranging over [1, range(0)].
void BM_OptimizeExhaustive(benchmark::State& state) {
  const Topology t = case_study_topology();
  const FlowSpec f = control_flow();
  OptimizerSettings s;
  s.mode = SearchMode::exhaustive;
  s.w2_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimize(t, f, s));
}
BENCHMARK(BM_OptimizeExhaustive)->Arg(2)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
