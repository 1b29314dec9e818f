#include "wrrnc/curves.hpp"

#include <cmath>
#include <string>

namespace wrrnc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

AffineArrivalCurve::AffineArrivalCurve(bits sigma, bits_per_second rho) : sigma_(sigma), rho_(rho) {
  require(sigma >= 0.0, "arrival burst must be nonnegative");
  require(rho >= 0.0, "arrival rate must be nonnegative");
}

PeriodicSource::PeriodicSource(bits frame_len, seconds period) : frame_len_(frame_len), period_(period) {
  require(frame_len >= 0.0, "frame length must be nonnegative");
  require(period > 0.0, "emission period must be positive");
}

RateLatencyCurve::RateLatencyCurve(bits_per_second rate, seconds latency)
    : rate_(rate), latency_(latency) {
  require(rate > 0.0, "service rate must be positive");
  require(latency >= 0.0, "service latency must be nonnegative");
}

WrrServicePattern::WrrServicePattern(seconds tau_v, seconds tau_f, bits_per_second capacity)
    : tau_v_(tau_v), tau_f_(tau_f), capacity_(capacity) {
  require(tau_v >= 0.0, "vacation period must be nonnegative");
  require(tau_f > 0.0, "forwarding period must be positive");
  require(capacity > 0.0, "capacity must be positive");
}

RateLatencyCurve WrrServicePattern::lower_envelope() const {
  return RateLatencyCurve(capacity_ * tau_f_ / cycle(), tau_v_);
}

bits WrrServicePattern::operator()(seconds t) const {
  detail::require_time(t);
  const double cycles = t / cycle();
  const bits ramp = capacity_ * std::max(0.0, t - tau_v_ * std::ceil(cycles));
  const bits plateau = capacity_ * tau_f_ * std::floor(cycles);
  return std::max(ramp, plateau);
}

DeviationGrid default_deviation_grid(const WrrServicePattern& service,
                                     const AffineArrivalCurve& arrival,
                                     seconds drain_time) {
  seconds shortest = service.tau_f();
  if (service.tau_v() > 0.0) shortest = std::min(shortest, service.tau_v());
  const seconds burst_time = arrival.sigma() / service.capacity();
  if (burst_time > 0.0) shortest = std::min(shortest, burst_time);
  return DeviationGrid{
      .horizon = drain_time + 10.0 * service.cycle(),
      .step = shortest / 100.0,
      .search_window = 1e4 * service.cycle(),
  };
}

AffineArrivalCurve affine_from_periodic(const PeriodicSource& src) {
  return AffineArrivalCurve(src.frame_len(), src.rate());
}

AffineArrivalCurve deconvolve(const AffineArrivalCurve& alpha, const RateLatencyCurve& beta) {
  if (alpha.rho() >= beta.rate()) {
    throw UnstableError("arrival rate " + std::to_string(alpha.rho()) +
                        " b/s is not below service rate " + std::to_string(beta.rate()) + " b/s");
  }
  return AffineArrivalCurve(alpha.sigma() + alpha.rho() * beta.latency(), alpha.rho());
}

}  // namespace wrrnc
