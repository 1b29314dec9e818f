#include "wrrnc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>

#include "wrrnc/errors.hpp"

namespace wrrnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hop {
  PortId id;
  bits_per_second capacity;
  bits max_bg_frame;
};

struct Problem {
  std::vector<Hop> hops;
  bits frame_len;
  AffineArrivalCurve source;
  seconds deadline;
  DepartureMode departure;
  int w1_cap;
};

Problem make_problem(const Topology& topo, const FlowSpec& flow, const OptimizerSettings& settings) {
  const PeriodicSource* src = flow.periodic();
  if (flow.cls != FlowClass::control || !src) {
    throw DomainError("flow " + flow.name + " is not a periodic control flow", "E_FLOW_SOURCE");
  }
  if (!flow.deadline) throw DomainError("flow " + flow.name + " has no deadline", "E_DEADLINE");
  if (settings.w1_cap < 1 || settings.w2_min < 1 || settings.w2_max < settings.w2_min) {
    throw DomainError("optimizer search ranges must be nonempty");
  }
  Problem p{{}, src->frame_len(), affine_from_periodic(*src), *flow.deadline, settings.departure,
            settings.w1_cap};
  for (const PortId& id : flow.path) {
    p.hops.push_back({id, topo.port_capacity(id), topo.settings(id).max_bg_frame});
  }
  return p;
}

PortConfig port_at(const Problem& p, std::size_t j, int w1, int w2) {
  return PortConfig(p.hops[j].capacity, w1, w2, p.hops[j].max_bg_frame);
}

// Smallest w1 satisfying both weight constraints, or nullopt past the cap.
std::optional<int> required_w1(const Problem& p, std::size_t j, int w2, const AffineArrivalCurve& arrival) {
  const PortConfig port = port_at(p, j, 1, w2);
  const ControlFlowAtPort flow(p.frame_len, arrival);
  try {
    const int w1 = std::max(min_weight_burst(port, flow, p.w1_cap), min_weight_mean(port, flow));
    if (w1 > p.w1_cap) return std::nullopt;
    return w1;
  } catch (const Error&) {
    return std::nullopt;
  }
}

seconds hop_floor(const Problem& p, std::size_t j, int w2) {
  return w2 * p.hops[j].max_bg_frame / p.hops[j].capacity + p.frame_len / p.hops[j].capacity;
}

struct Evaluation {
  std::vector<seconds> bounds;
  std::vector<bits_per_second> bandwidth;
  seconds end_to_end = 0.0;
  bits_per_second min_bw = kInf;
};

Evaluation evaluate(const Problem& p, const std::vector<int>& w1, const std::vector<int>& w2) {
  Evaluation e;
  AffineArrivalCurve arrival = p.source;
  for (std::size_t j = 0; j < p.hops.size(); ++j) {
    const PortConfig port = port_at(p, j, w1[j], w2[j]);
    const ControlFlowAtPort flow(p.frame_len, arrival);
    const seconds bound = delay_bound_overall(port, flow).overall;
    const bits_per_second bw = background_bandwidth(port, p.frame_len);
    e.bounds.push_back(bound);
    e.bandwidth.push_back(bw);
    e.end_to_end += bound;
    e.min_bw = std::min(e.min_bw, bw);
    arrival = departure_curve(port, flow, p.departure);
  }
  return e;
}

// Raise w1[j] for j >= from to the constraint minimum under the arrivals
// induced by the current weights. False when a hop needs more than the cap.
bool lift(const Problem& p, std::vector<int>& w1, const std::vector<int>& w2, std::size_t from) {
  AffineArrivalCurve arrival = p.source;
  for (std::size_t j = 0; j < p.hops.size(); ++j) {
    if (j >= from) {
      const auto need = required_w1(p, j, w2[j], arrival);
      if (!need) return false;
      w1[j] = std::max(w1[j], *need);
    }
    const PortConfig port = port_at(p, j, w1[j], w2[j]);
    arrival = departure_curve(port, ControlFlowAtPort(p.frame_len, arrival), p.departure);
  }
  return true;
}

WeightPlan make_plan(const std::string& flow, const Problem& p, const std::vector<int>& w1,
                     const std::vector<int>& w2) {
  const Evaluation e = evaluate(p, w1, w2);
  WeightPlan plan;
  plan.flow = flow;
  for (std::size_t j = 0; j < p.hops.size(); ++j) {
    plan.assignments.push_back({p.hops[j].id, w1[j], w2[j], e.bounds[j], e.bandwidth[j]});
  }
  plan.end_to_end_bound = e.end_to_end;
  plan.min_bg_bandwidth = e.min_bw;
  plan.feasible = e.end_to_end <= p.deadline;
  return plan;
}

std::optional<WeightPlan> unreachable(const std::string& flow, const Problem& p, const std::vector<int>& w2) {
  seconds floor = 0.0;
  for (std::size_t j = 0; j < p.hops.size(); ++j) floor += hop_floor(p, j, w2[j]);
  if (floor <= p.deadline) return std::nullopt;
  WeightPlan plan;
  plan.flow = flow;
  plan.issues.push_back({"E_DEADLINE_UNREACHABLE",
                         "sum of per-hop floors w2 tau_bar + L/C = " + std::to_string(floor * 1e6) +
                             " us exceeds deadline " + std::to_string(p.deadline * 1e6) + " us"});
  for (std::size_t j = 0; j < p.hops.size(); ++j) {
    plan.issues.push_back({"E_DEADLINE_UNREACHABLE", p.hops[j].id.str() + ": floor " +
                                                         std::to_string(hop_floor(p, j, w2[j]) * 1e6) +
                                                         " us with w2=" + std::to_string(w2[j])});
  }
  return plan;
}

WeightPlan paper_iterative(const Topology& topo, const FlowSpec& flow, const Problem& p,
                           const OptimizerSettings& settings) {
  const std::size_t n = p.hops.size();
  std::vector<int> w2 = settings.w2;
  if (w2.empty()) {
    for (const Hop& h : p.hops) w2.push_back(topo.settings(h.id).w2);
  }
  if (w2.size() != n) {
    throw DomainError("expected " + std::to_string(n) + " w2 values, got " + std::to_string(w2.size()));
  }
  if (std::any_of(w2.begin(), w2.end(), [](int w) { return w < 1; })) {
    throw DomainError("w2 values must be >= 1");
  }
  if (auto plan = unreachable(flow.name, p, w2)) return *plan;

  std::vector<int> w1(n, 1);
  if (!lift(p, w1, w2, 0)) {
    WeightPlan plan;
    plan.flow = flow.name;
    plan.issues.push_back({"E_W1_CAP", "weight constraints need w1 above the cap " + std::to_string(p.w1_cap)});
    return plan;
  }

  Evaluation current = evaluate(p, w1, w2);
  while (current.end_to_end > p.deadline) {
    std::optional<std::vector<int>> best;
    seconds best_e2e = kInf;
    for (std::size_t h = 0; h < n; ++h) {
      if (w1[h] >= p.w1_cap) continue;
      std::vector<int> cand = w1;
      ++cand[h];
      if (!lift(p, cand, w2, h + 1)) continue;
      const seconds e2e = evaluate(p, cand, w2).end_to_end;
      if (e2e < best_e2e) {
        best_e2e = e2e;
        best = std::move(cand);
      }
    }
    if (!best) {
      WeightPlan plan = make_plan(flow.name, p, w1, w2);
      plan.feasible = false;
      plan.issues.push_back({"E_W1_CAP", "no w1 increment within the cap " + std::to_string(p.w1_cap) +
                                             " meets the deadline"});
      for (std::size_t j = 0; j < n; ++j) {
        plan.issues.push_back({"E_W1_CAP", p.hops[j].id.str() + ": w1=" + std::to_string(w1[j]) +
                                               " bound " + std::to_string(current.bounds[j] * 1e6) +
                                               " us, floor " + std::to_string(hop_floor(p, j, w2[j]) * 1e6) +
                                               " us"});
      }
      return plan;
    }
    w1 = std::move(*best);
    current = evaluate(p, w1, w2);
  }
  return make_plan(flow.name, p, w1, w2);
}

class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(const Problem& p, const OptimizerSettings& s) : p_(p), s_(s) {
    const std::size_t n = p.hops.size();
    rest_floor_.assign(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;) rest_floor_[j] = rest_floor_[j + 1] + hop_floor(p, j, s.w2_min);
    w1_.assign(n, 0);
    w2_.assign(n, 0);
  }

  bool run() {
    if (rest_floor_[0] > p_.deadline) return false;
    descend(0, p_.source, 0.0, kInf);
    return found_;
  }

  const std::vector<int>& best_w1() const { return best_w1_; }
  const std::vector<int>& best_w2() const { return best_w2_; }

 private:
  void descend(std::size_t j, const AffineArrivalCurve& arrival, seconds sum, bits_per_second min_bw) {
    if (j == p_.hops.size()) {
      consider(min_bw);
      return;
    }
    for (int w2 = s_.w2_min; w2 <= s_.w2_max; ++w2) {
      const auto start = required_w1(p_, j, w2, arrival);
      if (!start) continue;
      for (int w1 = *start; w1 <= p_.w1_cap; ++w1) {
        const PortConfig port = port_at(p_, j, w1, w2);
        const bits_per_second bw = std::min(min_bw, background_bandwidth(port, p_.frame_len));
        // Background share only shrinks as w1 grows.
        if (found_ && bw < best_bw_) break;
        const ControlFlowAtPort flow(p_.frame_len, arrival);
        const seconds total = sum + delay_bound_overall(port, flow).overall;
        if (total + rest_floor_[j + 1] > p_.deadline) continue;
        w1_[j] = w1;
        w2_[j] = w2;
        descend(j + 1, departure_curve(port, flow, p_.departure), total, bw);
      }
    }
  }

  void consider(bits_per_second bw) {
    if (found_) {
      const auto key = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
        return std::make_tuple(std::accumulate(a.begin(), a.end(), 0),
                               std::accumulate(b.begin(), b.end(), 0), pairs);
      };
      if (bw < best_bw_) return;
      if (bw == best_bw_ && !(key(w1_, w2_) < key(best_w1_, best_w2_))) return;
    }
    found_ = true;
    best_bw_ = bw;
    best_w1_ = w1_;
    best_w2_ = w2_;
  }

  const Problem& p_;
  const OptimizerSettings& s_;
  std::vector<seconds> rest_floor_;
  std::vector<int> w1_, w2_;
  bool found_ = false;
  bits_per_second best_bw_ = 0.0;
  std::vector<int> best_w1_, best_w2_;
};

WeightPlan exhaustive(const FlowSpec& flow, const Problem& p, const OptimizerSettings& settings) {
  const std::vector<int> lowest(p.hops.size(), settings.w2_min);
  if (auto plan = unreachable(flow.name, p, lowest)) return *plan;

  ExhaustiveSearch search(p, settings);
  if (!search.run()) {
    WeightPlan plan;
    plan.flow = flow.name;
    plan.issues.push_back({"E_W1_CAP", "no weights with w1 <= " + std::to_string(p.w1_cap) + " and w2 in [" +
                                           std::to_string(settings.w2_min) + ", " +
                                           std::to_string(settings.w2_max) + "] meet the deadline"});
    for (std::size_t j = 0; j < p.hops.size(); ++j) {
      plan.issues.push_back({"E_W1_CAP", p.hops[j].id.str() + ": floor " +
                                             std::to_string(hop_floor(p, j, settings.w2_min) * 1e6) + " us"});
    }
    return plan;
  }
  return make_plan(flow.name, p, search.best_w1(), search.best_w2());
}

}  // namespace

WeightPlan optimize(const Topology& topo, const FlowSpec& flow, const OptimizerSettings& settings) {
  const Problem p = make_problem(topo, flow, settings);
  WeightPlan plan = settings.mode == SearchMode::exhaustive ? exhaustive(flow, p, settings)
                                                            : paper_iterative(topo, flow, p, settings);
  if (plan.feasible) {
    // Re-derive the reported numbers through the path analysis itself.
    const PathReport check = propagate_analysis(apply_plan(topo, plan), flow, settings.departure);
    plan.end_to_end_bound = check.end_to_end;
    plan.min_bg_bandwidth = check.min_bg_bandwidth;
    plan.feasible = check.deadline_met;
  }
  return plan;
}

int min_feasible_w1(bits_per_second capacity, int w2, bits max_bg_frame, const AffineArrivalCurve& arrival,
                    bits frame_len, seconds budget, int cap) {
  if (!(budget > 0.0)) throw DomainError("hop budget must be positive");
  const ControlFlowAtPort flow(frame_len, arrival);
  const PortConfig base(capacity, 1, w2, max_bg_frame);
  const int start = std::max(min_weight_burst(base, flow, cap), min_weight_mean(base, flow));
  for (int w1 = start; w1 <= cap; ++w1) {
    if (delay_bound_overall(base.with_weights(w1, w2), flow).overall <= budget) return w1;
  }
  throw InfeasibleError("no w1 <= " + std::to_string(cap) + " meets the hop budget", "E_W1_CAP");
}

Topology apply_plan(Topology topo, const WeightPlan& plan) {
  for (const WeightAssignment& a : plan.assignments) {
    PortSettings s = topo.settings(a.port);
    s.w1 = a.w1;
    s.w2 = a.w2;
    topo.set_port(a.port, s);
  }
  return topo;
}

}  // namespace wrrnc
