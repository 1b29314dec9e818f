#include <benchmark/benchmark.h>

#include "case_study.hpp"
#include "wrrnc/curves.hpp"
#include "wrrnc/topology.hpp"
#include "wrrnc/wrr_analysis.hpp"

namespace {

using namespace wrrnc;
using namespace wrrnc::testing;

void BM_DelayBoundOverall(benchmark::State& state) {
  const PortConfig p(kCapacity, 9, 2, kBgFrame);
  const ControlFlowAtPort f(kControlFrame, AffineArrivalCurve(2 * kControlFrame, kControlFrame / kPeriod));
  for (auto _ : state) benchmark::DoNotOptimize(delay_bound_overall(p, f));
}
BENCHMARK(BM_DelayBoundOverall);

void BM_PropagateAnalysis(benchmark::State& state) {
  const Topology t = case_study_topology();
  const FlowSpec f = control_flow();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_analysis(t, f));
}
BENCHMARK(BM_PropagateAnalysis);

// Numeric horizontal deviation; the argument is the number of steps per bound.
void BM_HorizontalDeviation(benchmark::State& state) {
  const PortConfig p(kCapacity, 2, 1, kBgFrame);
  const ControlFlowAtPort f(kControlFrame, AffineArrivalCurve(kControlFrame, kControlFrame / kPeriod));
  const double closed = delay_bound_burst(p, f);
  const double step = closed / static_cast<double>(state.range(0));
  const DeviationGrid grid{10 * closed, step, 1e4 * closed};
  const RateLatencyCurve beta = burst_service_envelope(p, f);
  for (auto _ : state) benchmark::DoNotOptimize(horizontal_deviation(f.arrival(), beta, grid));
}
BENCHMARK(BM_HorizontalDeviation)->Arg(100)->Arg(1000);

}  // namespace
