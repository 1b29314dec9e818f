#pragma once

#include <string>
#include <vector>

#include "wrrnc/topology.hpp"
#include "wrrnc/wrr_analysis.hpp"

namespace wrrnc {

enum class SearchMode {
  // Fix w2 per hop, start every w1 at its constraint minimum, then
  // repeatedly increment the w1 whose increase lowers the end-to-end bound
  // most until the deadline is met.
  paper_iterative,
  // Branch-and-bound over all (w1, w2) within the caps, maximizing the
  // smallest background bandwidth along the path.
  exhaustive,
};

struct OptimizerSettings {
  SearchMode mode = SearchMode::paper_iterative;
  // Per-hop w2 for paper_iterative; empty means "as configured".
  std::vector<int> w2;
  int w2_min = 1;
  int w2_max = 8;
  int w1_cap = kDefaultW1Cap;
  DepartureMode departure = DepartureMode::paper_case_study;
};

struct WeightAssignment {
  PortId port;
  int w1 = 1;
  int w2 = 1;
  seconds bound = 0.0;
  bits_per_second bg_bandwidth = 0.0;
};

struct WeightPlan {
  std::string flow;
  std::vector<WeightAssignment> assignments;
  seconds end_to_end_bound = 0.0;
  bits_per_second min_bg_bandwidth = 0.0;
  bool feasible = false;
  // Why no plan was found: E_DEADLINE_UNREACHABLE or E_W1_CAP plus one entry
  // per hop naming its binding constraint.
  std::vector<Diagnostic> issues;
};

WeightPlan optimize(const Topology& topo, const FlowSpec& flow, const OptimizerSettings& settings);

// Smallest w1 meeting the burst and steady-state constraints with an overall
// hop bound within `budget`. Throws InfeasibleError (E_W1_CAP) past `cap`.
int min_feasible_w1(bits_per_second capacity, int w2, bits max_bg_frame,
                    const AffineArrivalCurve& arrival, bits frame_len, seconds budget,
                    int cap = kDefaultW1Cap);

// Copy of `topo` with the plan's weights written into its ports.
Topology apply_plan(Topology topo, const WeightPlan& plan);

}  // namespace wrrnc
