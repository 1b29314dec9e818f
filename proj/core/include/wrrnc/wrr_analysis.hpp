#pragma once

#include <optional>

#include "wrrnc/curves.hpp"
#include "wrrnc/units.hpp"

namespace wrrnc {

// One two-class WRR output port. Queue 1 carries control traffic and is
// allowed `w1` frames per visit; queue 2 carries background traffic, `w2`
// frames of at most `max_bg_frame` bits per visit.
class PortConfig {
 public:
  PortConfig(bits_per_second capacity, int w1, int w2, bits max_bg_frame);

  bits_per_second capacity() const noexcept { return capacity_; }
  int w1() const noexcept { return w1_; }
  int w2() const noexcept { return w2_; }
  bits max_bg_frame() const noexcept { return max_bg_frame_; }

  // Transmission time of a maximum-length background frame.
  seconds tau_bar() const noexcept { return max_bg_frame_ / capacity_; }

  PortConfig with_weights(int w1, int w2) const { return {capacity_, w1, w2, max_bg_frame_}; }

  friend bool operator==(const PortConfig&, const PortConfig&) = default;

 private:
  bits_per_second capacity_;
  int w1_;
  int w2_;
  bits max_bg_frame_;
};

// Control flow as seen at the input of one port: constant frame length and
// an affine envelope with at least one frame of burst.
class ControlFlowAtPort {
 public:
  ControlFlowAtPort(bits frame_len, AffineArrivalCurve arrival);

  bits frame_len() const noexcept { return frame_len_; }
  const AffineArrivalCurve& arrival() const noexcept { return arrival_; }

 private:
  bits frame_len_;
  AffineArrivalCurve arrival_;
};

struct BurstPhaseResult {
  seconds tau_v;
  seconds tau_f;
  int k;               // cycles needed to forward the initial burst
  seconds drain_time;  // k * (tau_v + tau_f)

  // Filled in strict mode: k recomputed with the balance denominator
  // w1 L - rho (w1 tau + w2 tau_bar). Empty when that denominator is not
  // positive.
  bool strict_checked = false;
  std::optional<int> conservative_k;

  bool k_mismatch() const noexcept {
    return strict_checked && (!conservative_k || *conservative_k != k);
  }
};

struct MeanPhaseResult {
  seconds tau_v;
  seconds tau_f;
};

struct MeanDelayBounds {
  seconds refined;
  std::optional<seconds> pessimistic;  // undefined when rho == 0
};

struct HopDelayBound {
  seconds burst_bound;
  seconds mean_bound;
  std::optional<seconds> pessimistic_mean_bound;
  seconds overall;
};

enum class DepartureMode {
  eq12_min,          // min(w1 L, sigma + rho w2 tau_bar) + rho t
  paper_case_study,  // w1 L + rho t
};

enum class KCheck { verbatim, strict };

inline constexpr int kDefaultW1Cap = 64;

seconds frame_service_time(bits len, bits_per_second capacity);

// Vacation w2 tau_bar, forwarding w1 tau, and the number of cycles k needed to
// drain the burst: k = ceil(sigma / (C w1 tau - rho w2 tau_bar)).
BurstPhaseResult burst_phase(const PortConfig& port, const ControlFlowAtPort& flow,
                             KCheck check = KCheck::verbatim);

// k w1 L >= sigma + rho k (w2 tau_bar + w1 tau)
bool burst_weight_condition(const PortConfig& port, const ControlFlowAtPort& flow, int k);

// Smallest w1 whose burst is drained: iterate w1 = ceil(bound(k)),
// k = k(w1) from k = 1 until k is stable. Only w2, capacity and max_bg_frame
// of `port` are used.
int min_weight_burst(const PortConfig& port, const ControlFlowAtPort& flow, int cap = kDefaultW1Cap);

// Steady-state phase: the longest vacation fitting in one interarrival time,
// and the forwarding time needed for the traffic received meanwhile.
// Throws DomainError (E_MEAN_PHASE_UNDEFINED) when rho == 0.
MeanPhaseResult mean_phase(const PortConfig& port, const ControlFlowAtPort& flow);

// Smallest w1 with tau_f <= w1 L / C in the steady-state phase.
int min_weight_mean(const PortConfig& port, const ControlFlowAtPort& flow);

// (T - tau_i) + (sigma + rho tau_i) / R
seconds delay_bound_rate_latency(bits sigma, bits_per_second rho, bits_per_second rate,
                                 seconds latency, seconds tau_i = 0.0);

// Rate-latency curve under the burst-phase pattern:
// R = w1 L / (w1 tau + w2 tau_bar), T = w2 tau_bar.
RateLatencyCurve burst_service_envelope(const PortConfig& port, const ControlFlowAtPort& flow);
WrrServicePattern burst_service_pattern(const PortConfig& port, const ControlFlowAtPort& flow);

// w2 tau_bar + (sigma / C) (w1 L + w2 Lbar) / (w1 L)
seconds delay_bound_burst(const PortConfig& port, const ControlFlowAtPort& flow);

// refined = w2 tau_bar + L / C; pessimistic = mean-phase vacation.
MeanDelayBounds delay_bound_mean(const PortConfig& port, const ControlFlowAtPort& flow);

HopDelayBound delay_bound_overall(const PortConfig& port, const ControlFlowAtPort& flow);

AffineArrivalCurve departure_curve(const PortConfig& port, const ControlFlowAtPort& flow,
                                   DepartureMode mode);

namespace detail {
// ceil/floor that absorb floating-point noise around exact integers.
int robust_ceil(double x);
int robust_floor(double x);
}  // namespace detail

}  // namespace wrrnc
