#include <benchmark/benchmark.h>

#include "case_study.hpp"
#include "wrrnc/simulator.hpp"

namespace {

using namespace wrrnc;
using namespace wrrnc::testing;

// Simulated seconds of the case-study network per iteration.
void BM_SimulateCaseStudy(benchmark::State& state) {
  const Topology t = case_study_topology();
  const auto flows = case_study_flows();
  SimOptions o;
  o.duration = static_cast<double>(state.range(0));
  std::uint64_t frames = 0;
  for (auto _ : state) {
    const SimTrace tr = run_simulation(t, flows, o);
    frames += tr.find_port(pid("sw1", 3))->background_frames;
    ++o.seed;
  }
  state.counters["bg_frames/s"] = benchmark::Counter(static_cast<double>(frames), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateCaseStudy)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
