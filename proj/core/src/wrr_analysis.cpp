#include "wrrnc/wrr_analysis.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

#include "wrrnc/errors.hpp"

namespace wrrnc {

namespace detail {

namespace {
constexpr double kIntegerSnap = 1e-9;

int clamp_to_int(double x) {
  if (x >= static_cast<double>(INT_MAX)) return INT_MAX;
  if (x <= static_cast<double>(INT_MIN)) return INT_MIN;
  return static_cast<int>(x);
}
}  // namespace

int robust_ceil(double x) {
  return clamp_to_int(std::ceil(x - kIntegerSnap * std::max(1.0, std::abs(x))));
}

int robust_floor(double x) {
  return clamp_to_int(std::floor(x + kIntegerSnap * std::max(1.0, std::abs(x))));
}

}  // namespace detail

namespace {

void require_stable(const PortConfig& port, const ControlFlowAtPort& flow) {
  if (flow.arrival().rho() >= port.capacity()) {
    throw UnstableError("control rate " + std::to_string(flow.arrival().rho()) +
                        " b/s is not below port capacity " + std::to_string(port.capacity()) +
                        " b/s");
  }
}

}  // namespace

PortConfig::PortConfig(bits_per_second capacity, int w1, int w2, bits max_bg_frame)
    : capacity_(capacity), w1_(w1), w2_(w2), max_bg_frame_(max_bg_frame) {
  if (!(capacity > 0.0)) throw DomainError("port capacity must be positive");
  if (w1 < 1 || w2 < 1) throw DomainError("WRR weights must be integers >= 1");
  if (!(max_bg_frame > 0.0)) throw DomainError("maximum background frame must be positive");
}

ControlFlowAtPort::ControlFlowAtPort(bits frame_len, AffineArrivalCurve arrival)
    : frame_len_(frame_len), arrival_(arrival) {
  if (!(frame_len > 0.0)) throw DomainError("control frame length must be positive");
  if (arrival.sigma() < frame_len * (1.0 - 1e-12)) {
    throw DomainError("control burst must hold at least one frame");
  }
}

seconds frame_service_time(bits len, bits_per_second capacity) {
  if (!(capacity > 0.0)) throw DomainError("capacity must be positive");
  if (!(len >= 0.0)) throw DomainError("frame length must be nonnegative");
  return len / capacity;
}

BurstPhaseResult burst_phase(const PortConfig& port, const ControlFlowAtPort& flow, KCheck check) {
  require_stable(port, flow);
  const bits_per_second c = port.capacity();
  const bits_per_second rho = flow.arrival().rho();
  const seconds tau = flow.frame_len() / c;
  const seconds tau_v = port.w2() * port.tau_bar();
  const seconds tau_f = port.w1() * tau;

  const bits served = c * tau_f;
  const bits denom = served - rho * tau_v;
  if (denom <= 1e-12 * served) {
    throw SaturationError("burst never drains: w1 L = " + std::to_string(served) +
                          " bits per cycle does not exceed rho w2 tau_bar = " +
                          std::to_string(rho * tau_v) + " bits");
  }

  BurstPhaseResult r{};
  r.tau_v = tau_v;
  r.tau_f = tau_f;
  r.k = std::max(1, detail::robust_ceil(flow.arrival().sigma() / denom));
  r.drain_time = r.k * (tau_v + tau_f);

  if (check == KCheck::strict) {
    r.strict_checked = true;
    const bits balance = served - rho * (tau_f + tau_v);
    if (balance > 1e-12 * served) {
      r.conservative_k = std::max(1, detail::robust_ceil(flow.arrival().sigma() / balance));
    }
  }
  return r;
}

bool burst_weight_condition(const PortConfig& port, const ControlFlowAtPort& flow, int k) {
  const double rho = flow.arrival().rho();
  const seconds tau = flow.frame_len() / port.capacity();
  const double lhs = k * port.w1() * flow.frame_len();
  const double rhs = flow.arrival().sigma() + rho * k * (port.w2() * port.tau_bar() + port.w1() * tau);
  return lhs >= rhs * (1.0 - 1e-12);
}

int min_weight_burst(const PortConfig& port, const ControlFlowAtPort& flow, int cap) {
  require_stable(port, flow);
  const double l = flow.frame_len();
  const double sigma = flow.arrival().sigma();
  const double rho = flow.arrival().rho();
  const seconds tau = l / port.capacity();
  const seconds tau_v = port.w2() * port.tau_bar();

  int k = 1;
  for (int iter = 0; iter <= cap; ++iter) {
    const double bound = (sigma + rho * k * tau_v) / (k * (l - rho * tau));
    const int w1 = std::max(1, detail::robust_ceil(bound));
    if (w1 > cap) {
      throw InfeasibleError("burst constraint needs w1 >= " + std::to_string(w1) +
                                " which exceeds the cap " + std::to_string(cap),
                            "E_W1_CAP");
    }
    const bits denom = w1 * l - rho * tau_v;
    const int next_k = std::max(1, detail::robust_ceil(sigma / denom));
    if (next_k == k) return w1;
    k = next_k;
  }
  throw InfeasibleError("burst weight iteration did not settle", "E_W1_CAP");
}

MeanPhaseResult mean_phase(const PortConfig& port, const ControlFlowAtPort& flow) {
  const bits_per_second rho = flow.arrival().rho();
  if (rho == 0.0) {
    throw DomainError("mean phase undefined for rho = 0; burst phase governs",
                      "E_MEAN_PHASE_UNDEFINED");
  }
  require_stable(port, flow);
  const bits_per_second c = port.capacity();
  const seconds tau = flow.frame_len() / c;
  const seconds one_visit = port.w2() * port.tau_bar();
  const int visits = std::max(0, detail::robust_floor((flow.frame_len() / rho - tau) / one_visit));
  const seconds tau_v = visits * one_visit;
  return MeanPhaseResult{tau_v, rho * tau_v / (c - rho)};
}

int min_weight_mean(const PortConfig& port, const ControlFlowAtPort& flow) {
  if (flow.arrival().rho() == 0.0) return 1;
  const MeanPhaseResult m = mean_phase(port, flow);
  return std::max(1, detail::robust_ceil(m.tau_f * port.capacity() / flow.frame_len()));
}

seconds delay_bound_rate_latency(bits sigma, bits_per_second rho, bits_per_second rate,
                                 seconds latency, seconds tau_i) {
  if (!(rate > 0.0)) throw DomainError("service rate must be positive");
  if (!(sigma >= 0.0) || !(rho >= 0.0) || !(latency >= 0.0) || !(tau_i >= 0.0)) {
    throw DomainError("delay bound arguments must be nonnegative");
  }
  if (rho >= rate) {
    throw UnstableError("arrival rate " + std::to_string(rho) + " b/s is not below service rate " +
                        std::to_string(rate) + " b/s");
  }
  return (latency - tau_i) + (sigma + rho * tau_i) / rate;
}

RateLatencyCurve burst_service_envelope(const PortConfig& port, const ControlFlowAtPort& flow) {
  const seconds tau_v = port.w2() * port.tau_bar();
  const seconds tau_f = port.w1() * flow.frame_len() / port.capacity();
  return RateLatencyCurve(port.w1() * flow.frame_len() / (tau_f + tau_v), tau_v);
}

WrrServicePattern burst_service_pattern(const PortConfig& port, const ControlFlowAtPort& flow) {
  return WrrServicePattern(port.w2() * port.tau_bar(), port.w1() * flow.frame_len() / port.capacity(),
                           port.capacity());
}

seconds delay_bound_burst(const PortConfig& port, const ControlFlowAtPort& flow) {
  burst_phase(port, flow);
  const RateLatencyCurve envelope = burst_service_envelope(port, flow);
  if (flow.arrival().rho() >= envelope.rate()) {
    throw UnstableError("control rate is not below the WRR service rate w1 L / cycle");
  }
  const double w1l = port.w1() * flow.frame_len();
  const double cycle_bits = w1l + port.w2() * port.max_bg_frame();
  return port.w2() * port.tau_bar() + (flow.arrival().sigma() / port.capacity()) * cycle_bits / w1l;
}

MeanDelayBounds delay_bound_mean(const PortConfig& port, const ControlFlowAtPort& flow) {
  require_stable(port, flow);
  MeanDelayBounds out{port.w2() * port.tau_bar() + flow.frame_len() / port.capacity(), std::nullopt};
  if (flow.arrival().rho() > 0.0) out.pessimistic = mean_phase(port, flow).tau_v;
  return out;
}

HopDelayBound delay_bound_overall(const PortConfig& port, const ControlFlowAtPort& flow) {
  const seconds burst = delay_bound_burst(port, flow);
  const MeanDelayBounds mean = delay_bound_mean(port, flow);
  return HopDelayBound{burst, mean.refined, mean.pessimistic, std::max(burst, mean.refined)};
}

AffineArrivalCurve departure_curve(const PortConfig& port, const ControlFlowAtPort& flow,
                                   DepartureMode mode) {
  burst_phase(port, flow);
  const AffineArrivalCurve& in = flow.arrival();
  const bits per_cycle = port.w1() * flow.frame_len();
  switch (mode) {
    case DepartureMode::paper_case_study:
      return AffineArrivalCurve(per_cycle, in.rho());
    case DepartureMode::eq12_min:
      break;
  }
  return AffineArrivalCurve(std::min(per_cycle, in.sigma() + in.rho() * port.w2() * port.tau_bar()),
                            in.rho());
}

}  // namespace wrrnc
