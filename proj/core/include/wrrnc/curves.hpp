#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <vector>

#include "wrrnc/errors.hpp"
#include "wrrnc/units.hpp"

namespace wrrnc {

namespace detail {
inline void require_time(seconds t) {
  if (!(t >= 0.0)) throw DomainError("curve evaluated at negative time " + std::to_string(t));
}
}  // namespace detail

// Token-bucket envelope: at most sigma + rho * t bits in any window of length t.
class AffineArrivalCurve {
 public:
  AffineArrivalCurve(bits sigma, bits_per_second rho);

  bits sigma() const noexcept { return sigma_; }
  bits_per_second rho() const noexcept { return rho_; }

  bits operator()(seconds t) const {
    detail::require_time(t);
    return sigma_ + rho_ * t;
  }

  friend bool operator==(const AffineArrivalCurve&, const AffineArrivalCurve&) = default;

 private:
  bits sigma_;
  bits_per_second rho_;
};

// One frame of `frame_len` bits every `period` seconds.
class PeriodicSource {
 public:
  PeriodicSource(bits frame_len, seconds period);

  bits frame_len() const noexcept { return frame_len_; }
  seconds period() const noexcept { return period_; }
  bits_per_second rate() const noexcept { return frame_len_ / period_; }

  friend bool operator==(const PeriodicSource&, const PeriodicSource&) = default;

 private:
  bits frame_len_;
  seconds period_;
};

// beta(t) = rate * (t - latency)+
class RateLatencyCurve {
 public:
  RateLatencyCurve(bits_per_second rate, seconds latency);

  bits_per_second rate() const noexcept { return rate_; }
  seconds latency() const noexcept { return latency_; }

  bits operator()(seconds t) const {
    detail::require_time(t);
    return rate_ * std::max(0.0, t - latency_);
  }

  friend bool operator==(const RateLatencyCurve&, const RateLatencyCurve&) = default;

 private:
  bits_per_second rate_;
  seconds latency_;
};

// Periodic WRR service: each cycle of length tau_v + tau_f is a vacation of
// tau_v followed by full-rate forwarding for tau_f.
//
//   W(t) = max( C (t - tau_v ceil(t / cycle))+ , C tau_f floor(t / cycle) )
class WrrServicePattern {
 public:
  WrrServicePattern(seconds tau_v, seconds tau_f, bits_per_second capacity);

  seconds tau_v() const noexcept { return tau_v_; }
  seconds tau_f() const noexcept { return tau_f_; }
  bits_per_second capacity() const noexcept { return capacity_; }
  seconds cycle() const noexcept { return tau_v_ + tau_f_; }

  // Long-run rate and worst-case latency of the rate-latency curve that
  // lower-bounds the pattern.
  RateLatencyCurve lower_envelope() const;

  bits operator()(seconds t) const;

  friend bool operator==(const WrrServicePattern&, const WrrServicePattern&) = default;

 private:
  seconds tau_v_;
  seconds tau_f_;
  bits_per_second capacity_;
};

struct CurveSample {
  seconds t;
  bits value;
};

template <typename F>
concept Curve = requires(const F& f, seconds t) {
  { f(t) } -> std::convertible_to<bits>;
};

// Sampling parameters for the numeric horizontal deviation.
struct DeviationGrid {
  seconds horizon;
  seconds step;
  // Largest delay searched for a single sample before declaring saturation.
  seconds search_window;
};

// Default grid for an affine flow served by a WRR pattern: step is a
// hundredth of the shortest of tau_v, tau_f and sigma/C; the horizon runs ten
// cycles past the burst drain time; the search window is 1e4 cycles.
DeviationGrid default_deviation_grid(const WrrServicePattern& service,
                                     const AffineArrivalCurve& arrival,
                                     seconds drain_time);

template <Curve F>
std::vector<CurveSample> sample_curve(const F& f, seconds horizon, seconds step) {
  if (!(step > 0.0)) throw DomainError("sampling step must be positive");
  std::vector<CurveSample> out;
  const auto n = static_cast<std::size_t>(std::floor(horizon / step));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const seconds t = static_cast<double>(i) * step;
    out.push_back({t, static_cast<bits>(f(t))});
  }
  return out;
}

// d(t) = inf { D >= 0 : alpha(t) <= beta(t + D) }, resolved from above to
// `resolution`. Throws SaturationError when beta does not reach alpha(t)
// within `window`.
template <Curve A, Curve B>
seconds delay_at(const A& alpha, const B& beta, seconds t, seconds resolution,
                 seconds window) {
  const bits target = alpha(t);
  if (beta(t) >= target) return 0.0;

  seconds lo = 0.0;
  seconds hi = resolution;
  while (beta(t + hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (lo > window) {
      throw SaturationError("service never reaches the arrival curve (not enough resources allocated)");
    }
  }
  while (hi - lo > resolution) {
    const seconds mid = lo + 0.5 * (hi - lo);
    if (beta(t + mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Supremum of d(t) over t in {0, step, 2 step, ..., horizon}.
template <Curve A, Curve B>
seconds horizontal_deviation(const A& alpha, const B& beta, const DeviationGrid& grid) {
  if (!(grid.step > 0.0)) throw DomainError("deviation step must be positive");
  if (!(grid.horizon >= 0.0)) throw DomainError("deviation horizon must be nonnegative");
  const seconds resolution = grid.step * 1e-3;
  const auto n = static_cast<std::size_t>(std::floor(grid.horizon / grid.step));
  seconds worst = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const seconds t = static_cast<double>(i) * grid.step;
    worst = std::max(worst, delay_at(alpha, beta, t, resolution, grid.search_window));
  }
  return worst;
}

AffineArrivalCurve affine_from_periodic(const PeriodicSource& src);

// Output envelope of an affine flow crossing a rate-latency server:
// (sigma + rho T) + rho t.
AffineArrivalCurve deconvolve(const AffineArrivalCurve& alpha, const RateLatencyCurve& beta);

}  // namespace wrrnc
