#include <gtest/gtest.h>

#include <random>

#include "wrrnc/wrr_analysis.hpp"

namespace wrrnc {
namespace {

constexpr double kC = 1e7;
constexpr double kL = 576;        // 72 bytes
constexpr double kLbar = 12208;   // 1526 bytes
constexpr double kRho = 115200;   // 576 bits every 5 ms
constexpr double kUs = 1e-6;

PortConfig port(int w1, int w2) { return PortConfig(kC, w1, w2, kLbar); }
ControlFlowAtPort flow(double sigma, double rho = kRho) { return ControlFlowAtPort(kL, AffineArrivalCurve(sigma, rho)); }

// Burst-phase bound computed from its textbook form.
double burst_oracle(double C, int w1, int w2, double L, double Lbar, double sigma) {
  return w2 * Lbar / C + (sigma / C) * (w1 * L + w2 * Lbar) / (w1 * L);
}

TEST(FrameServiceTime, LengthOverCapacity) {
  EXPECT_NEAR(frame_service_time(576, kC), 57.6 * kUs, 1e-15);
  EXPECT_NEAR(frame_service_time(12208, kC), 1220.8 * kUs, 1e-15);
  EXPECT_DOUBLE_EQ(frame_service_time(0, 3.0), 0.0);
  EXPECT_THROW(frame_service_time(1, 0.0), DomainError);
}

TEST(PortConfig, RejectsInvalidWeights) {
  EXPECT_THROW(PortConfig(kC, 0, 1, kLbar), DomainError);
  EXPECT_THROW(PortConfig(kC, 1, 0, kLbar), DomainError);
  EXPECT_THROW(PortConfig(0, 1, 1, kLbar), DomainError);
  EXPECT_THROW(PortConfig(kC, 1, 1, 0), DomainError);
  EXPECT_NEAR(port(1, 1).tau_bar(), 1220.8 * kUs, 1e-15);
}

TEST(ControlFlowAtPort, BurstHoldsAtLeastOneFrame) {
  EXPECT_THROW(ControlFlowAtPort(576, AffineArrivalCurve(500, 0)), DomainError);
  EXPECT_THROW(ControlFlowAtPort(0, AffineArrivalCurve(500, 0)), DomainError);
}

TEST(BurstPhase, CaseStudySwitchOne) {
  const auto r = burst_phase(port(2, 1), flow(576));
  EXPECT_NEAR(r.tau_v, 1220.8 * kUs, 1e-12);
  EXPECT_NEAR(r.tau_f, 115.2 * kUs, 1e-12);
  EXPECT_EQ(r.k, 1);
  EXPECT_NEAR(r.drain_time, 1336 * kUs, 1e-12);
}

TEST(BurstPhase, LargerBurstsNeedMoreCycles) {
  const double denominator = kC * 2 * (kL / kC) - kRho * 1 * (kLbar / kC);  // 1011.36 bits
  EXPECT_EQ(burst_phase(port(2, 1), flow(2000)).k, static_cast<int>(std::ceil(2000 / denominator)));
  EXPECT_EQ(burst_phase(port(2, 1), flow(2000)).k, 2);
  // 2024 / 1011.36 = 2.0013: a third cycle is needed.
  EXPECT_EQ(burst_phase(port(2, 1), flow(2024)).k, static_cast<int>(std::ceil(2024 / denominator)));
  EXPECT_EQ(burst_phase(port(2, 1), flow(2024)).k, 3);
}

TEST(BurstPhase, ZeroRateDrainsOneFrameInOneCycle) {
  const auto r = burst_phase(port(1, 1), flow(576, 0));
  EXPECT_NEAR(r.tau_v, 1220.8 * kUs, 1e-12);
  EXPECT_NEAR(r.tau_f, 57.6 * kUs, 1e-12);
  EXPECT_EQ(r.k, 1);
}

TEST(BurstPhase, SaturatesWhenVacationArrivalsExceedQuota) {
  // rho w2 tau_bar = 115200 * 8 * 1220.8e-6 = 1125 bits > 576 bits per cycle
  EXPECT_THROW(burst_phase(port(1, 8), flow(576)), SaturationError);
}

TEST(BurstPhase, StrictModeFlagsDisagreeingK) {
  const auto same = burst_phase(port(2, 1), flow(576), KCheck::strict);
  EXPECT_TRUE(same.strict_checked);
  EXPECT_FALSE(same.k_mismatch());
  // verbatim denominator 1011.36, conservative 1152 - 115200 * 1336e-6 = 998.09
  const auto differ = burst_phase(port(2, 1), flow(1005), KCheck::strict);
  EXPECT_EQ(differ.k, 1);
  ASSERT_TRUE(differ.conservative_k.has_value());
  EXPECT_EQ(*differ.conservative_k, 2);
  EXPECT_TRUE(differ.k_mismatch());
  EXPECT_FALSE(burst_phase(port(2, 1), flow(1005)).strict_checked);
}

TEST(BurstWeightCondition, DirectCheck) {
  // k w1 L >= sigma + rho k (w2 tau_bar + w1 tau)
  EXPECT_TRUE(burst_weight_condition(port(2, 1), flow(576), 1));
  EXPECT_FALSE(burst_weight_condition(port(1, 1), flow(576), 1));
  const double lhs = 1 * 1 * kL;
  const double rhs = 576 + kRho * 1 * (1220.8 * kUs + 57.6 * kUs);
  EXPECT_LT(lhs, rhs);
}

TEST(MinWeightBurst, Examples) {
  EXPECT_EQ(min_weight_burst(port(1, 1), flow(576)), 2);
  EXPECT_EQ(min_weight_burst(port(1, 2), flow(1152)), 3);
  EXPECT_EQ(min_weight_burst(port(1, 5), flow(576, 0)), 1);
  EXPECT_EQ(min_weight_burst(port(7, 1), flow(576)), 2) << "configured w1 is ignored";
}

TEST(MinWeightBurst, CapExceededIsInfeasible) {
  try {
    min_weight_burst(port(1, 1), flow(1e6), 4);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.code(), "E_W1_CAP");
  }
}

TEST(MeanPhase, Examples) {
  const auto one = mean_phase(port(2, 1), flow(576));
  EXPECT_NEAR(one.tau_v, 4883.2 * kUs, 1e-12);
  EXPECT_NEAR(one.tau_f, kRho * 4883.2 * kUs / (kC - kRho), 1e-15);
  EXPECT_NEAR(one.tau_f, 56.91 * kUs, 0.01 * kUs);

  const auto two = mean_phase(port(2, 2), flow(576));
  EXPECT_NEAR(two.tau_v, 4883.2 * kUs, 1e-12);

  const auto none = mean_phase(port(2, 5), flow(576));
  EXPECT_DOUBLE_EQ(none.tau_v, 0.0);
  EXPECT_DOUBLE_EQ(none.tau_f, 0.0);
}

TEST(MeanPhase, UndefinedWithoutRate) {
  try {
    mean_phase(port(2, 1), flow(576, 0));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code(), "E_MEAN_PHASE_UNDEFINED");
  }
}

TEST(MinWeightMean, Examples) {
  EXPECT_EQ(min_weight_mean(port(1, 1), flow(576)), 1);
  EXPECT_EQ(min_weight_mean(port(1, 2), flow(576)), 1);
  EXPECT_EQ(min_weight_mean(port(1, 1), flow(576, 0)), 1);
  EXPECT_EQ(min_weight_mean(port(1, 1), flow(576, 1e-6)), 1);
}

TEST(MinWeightMean, OneFrameCoversTheLongestVacation) {
  // tau_v <= L/rho - tau, so rho tau_v / (C - rho) <= L / C for every rate.
  for (double rho : {1e3, 1e5, 1e6, 4e6, 9e6}) {
    const PortConfig p(kC, 1, 1, 100);
    const ControlFlowAtPort f(kL, AffineArrivalCurve(kL, rho));
    EXPECT_LE(mean_phase(p, f).tau_f, kL / kC * (1 + 1e-12)) << rho;
    EXPECT_EQ(min_weight_mean(p, f), 1) << rho;
  }
}

TEST(DelayBoundRateLatency, Examples) {
  EXPECT_NEAR(delay_bound_rate_latency(576, kRho, 862275.45, 1220.8 * kUs), 1888.8 * kUs, 1e-9);
  EXPECT_DOUBLE_EQ(delay_bound_rate_latency(0, kRho, 862275.45, 0.0), 0.0);
  EXPECT_NEAR(delay_bound_rate_latency(1152, kRho, 9 * 576 / 2960e-6, 2441.6 * kUs), 3099.4 * kUs, 0.05 * kUs);
  // (T - ti) + (sigma + rho ti) / R
  EXPECT_NEAR(delay_bound_rate_latency(1000, 1e4, 1e6, 2e-3, 5e-4), 1.5e-3 + (1000 + 5) / 1e6, 1e-15);
  EXPECT_THROW(delay_bound_rate_latency(576, 1e6, 1e6, 0.0), UnstableError);
}

TEST(DelayBoundBurst, CaseStudy) {
  EXPECT_NEAR(delay_bound_burst(port(2, 1), flow(576)), 1888.8 * kUs, 1e-10);
  EXPECT_NEAR(delay_bound_burst(port(9, 2), flow(1152)), 3099.4 * kUs, 0.05 * kUs);
  EXPECT_NEAR(delay_bound_burst(port(9, 2), flow(1152)), burst_oracle(kC, 9, 2, kL, kLbar, 1152), 1e-15);
}

TEST(DelayBoundBurst, LargeQuotaLimit) {
  const double d = delay_bound_burst(port(1000000, 1), flow(576));
  EXPECT_NEAR(d, 1220.8 * kUs + 576 / kC, 2e-9);
}

TEST(DelayBoundMean, Examples) {
  const auto m = delay_bound_mean(port(2, 1), flow(576));
  EXPECT_NEAR(m.refined, 1278.4 * kUs, 1e-12);
  ASSERT_TRUE(m.pessimistic);
  EXPECT_NEAR(*m.pessimistic, 4883.2 * kUs, 1e-12);
  EXPECT_NEAR(delay_bound_mean(port(2, 2), flow(576)).refined, 2499.2 * kUs, 1e-12);

  const ControlFlowAtPort tiny(1e-6, AffineArrivalCurve(1e-6, 1e-6));
  EXPECT_NEAR(delay_bound_mean(port(2, 1), tiny).refined, 1220.8 * kUs, 1e-12);

  const auto still = delay_bound_mean(port(2, 1), flow(576, 0));
  EXPECT_NEAR(still.refined, 1278.4 * kUs, 1e-12);
  EXPECT_FALSE(still.pessimistic);
}

TEST(DelayBoundOverall, CaseStudy) {
  const auto s1 = delay_bound_overall(port(2, 1), flow(576));
  EXPECT_NEAR(s1.overall, 1888.8 * kUs, 1e-10);
  EXPECT_EQ(s1.overall, s1.burst_bound);
  EXPECT_NEAR(s1.mean_bound, 1278.4 * kUs, 1e-12);
  ASSERT_TRUE(s1.pessimistic_mean_bound);

  const auto s2 = delay_bound_overall(port(9, 2), flow(1152));
  EXPECT_NEAR(s2.overall, 3099.4 * kUs, 0.05 * kUs);
}

TEST(DelayBoundOverall, MeanBoundGovernsWithLargeQuota) {
  // burst term sigma/C (w1 L + w2 Lbar)/(w1 L) drops below L/C when w1 is large
  // only in the limit; with sigma = L it stays above, so the burst bound
  // governs. Compare both closed forms directly.
  for (int w1 : {1, 2, 10, 100, 10000}) {
    const auto b = delay_bound_overall(port(w1, 1), flow(576, 0));
    const double burst = burst_oracle(kC, w1, 1, kL, kLbar, 576);
    const double mean = 1220.8 * kUs + kL / kC;
    EXPECT_NEAR(b.overall, std::max(burst, mean), 1e-15) << w1;
  }
  // A burst shorter than one frame cannot occur, so at sigma = L the two
  // forms meet only as w1 grows without bound.
  const auto far = delay_bound_overall(port(1000000, 1), flow(576, 0));
  EXPECT_NEAR(far.overall, far.mean_bound, 2e-9);
}

TEST(DepartureCurve, Modes) {
  const auto paper = departure_curve(port(2, 1), flow(576), DepartureMode::paper_case_study);
  EXPECT_EQ(paper, AffineArrivalCurve(1152, kRho));
  const auto eq12 = departure_curve(port(2, 1), flow(576), DepartureMode::eq12_min);
  EXPECT_NEAR(eq12.sigma(), 576 + kRho * 1220.8 * kUs, 1e-9);
  EXPECT_NEAR(eq12.sigma(), 716.62, 0.02);
  EXPECT_DOUBLE_EQ(eq12.rho(), kRho);
  for (int w1 : {1, 2, 5}) {
    EXPECT_EQ(departure_curve(port(w1, 1), flow(576, 0), DepartureMode::eq12_min), AffineArrivalCurve(576, 0));
  }
}

TEST(BurstServiceEnvelope, RateAndLatency) {
  const auto e = burst_service_envelope(port(2, 1), flow(576));
  EXPECT_NEAR(e.rate(), 1152 / 1336e-6, 1e-6);
  EXPECT_NEAR(e.latency(), 1220.8 * kUs, 1e-15);
  const auto w = burst_service_pattern(port(2, 1), flow(576));
  EXPECT_NEAR(w.tau_f(), 115.2 * kUs, 1e-15);
}

TEST(RobustRounding, AbsorbsNoise) {
  EXPECT_EQ(detail::robust_ceil(2.0000000000001), 2);
  EXPECT_EQ(detail::robust_ceil(2.01), 3);
  EXPECT_EQ(detail::robust_floor(3.9999999999999), 4);
  EXPECT_EQ(detail::robust_floor(3.99), 3);
}

// Properties over random valid parameter sets.

class AnalysisProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{77};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  struct Case {
    PortConfig port;
    ControlFlowAtPort flow;
  };

  Case random_case() {
    const double C = uniform(1e6, 1e9);
    const double L = uniform(512, 12208);
    const double Lbar = uniform(512, 12208);
    const int w1 = integer(1, 20);
    const int w2 = integer(1, 8);
    const double R = w1 * L / (w1 * L / C + w2 * Lbar / C);
    const double rho = uniform(0, 0.9) * R;
    const double sigma = uniform(L, 10 * L);
    return {PortConfig(C, w1, w2, Lbar), ControlFlowAtPort(L, AffineArrivalCurve(sigma, rho))};
  }
};

TEST_F(AnalysisProperties, BurstBoundEqualsRateLatencyBound) {
  for (int i = 0; i < 2000; ++i) {
    const auto [p, f] = random_case();
    const double tau = f.frame_len() / p.capacity();
    const double R = p.w1() * f.frame_len() / (p.w1() * tau + p.w2() * p.tau_bar());
    const double T = p.w2() * p.tau_bar();
    const double eq7 = delay_bound_rate_latency(f.arrival().sigma(), f.arrival().rho(), R, T);
    const double eq8 = delay_bound_burst(p, f);
    EXPECT_NEAR(eq8, eq7, 1e-12 * eq7);
    EXPECT_NEAR(eq8, burst_oracle(p.capacity(), p.w1(), p.w2(), f.frame_len(), p.max_bg_frame(), f.arrival().sigma()),
                1e-12 * eq8);
  }
}

TEST_F(AnalysisProperties, BurstBoundMatchesNumericDeviation) {
  for (int i = 0; i < 100; ++i) {
    const auto [p, f] = random_case();
    const double closed = delay_bound_burst(p, f);
    const double step = closed / 200;
    const DeviationGrid g{10 * closed, step, 1e4 * closed};
    EXPECT_NEAR(horizontal_deviation(f.arrival(), burst_service_envelope(p, f), g), closed, 2 * step);
  }
}

TEST_F(AnalysisProperties, BurstBoundMonotoneInWeights) {
  for (int i = 0; i < 500; ++i) {
    const auto [p, f] = random_case();
    EXPECT_LT(delay_bound_burst(p.with_weights(p.w1() + 1, p.w2()), f), delay_bound_burst(p, f));
    // A larger w2 keeps the flow schedulable only if the burst still drains.
    const PortConfig heavier = p.with_weights(p.w1(), p.w2() + 1);
    try {
      EXPECT_GT(delay_bound_burst(heavier, f), delay_bound_burst(p, f));
    } catch (const Error&) {
    }
  }
}

TEST_F(AnalysisProperties, MinWeightBurstIsMinimal) {
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto [p, f] = random_case();
    int w = 0;
    try {
      w = min_weight_burst(p, f);
    } catch (const InfeasibleError&) {
      continue;
    }
    ++checked;
    const PortConfig at = p.with_weights(w, p.w2());
    const auto burst = burst_phase(at, f);
    EXPECT_TRUE(burst_weight_condition(at, f, burst.k));
    if (w > 1) {
      const PortConfig below = p.with_weights(w - 1, p.w2());
      EXPECT_FALSE(burst_weight_condition(below, f, burst.k)) << "w=" << w;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST_F(AnalysisProperties, MinWeightMeanMeetsForwardingRequirement) {
  for (int i = 0; i < 2000; ++i) {
    const auto [p, f] = random_case();
    if (f.arrival().rho() <= 0 || f.frame_len() / f.arrival().rho() <= f.frame_len() / p.capacity()) continue;
    const int w = min_weight_mean(p, f);
    const double tau_f = mean_phase(p, f).tau_f;
    const double tau = f.frame_len() / p.capacity();
    EXPECT_LE(tau_f, w * tau * (1 + 1e-9));
    if (w > 1) {
      EXPECT_GT(tau_f, (w - 1) * tau);
    }
  }
}

TEST_F(AnalysisProperties, DepartureEq12NeverExceedsCaseStudyForm) {
  for (int i = 0; i < 2000; ++i) {
    const auto [p, f] = random_case();
    const auto a = departure_curve(p, f, DepartureMode::eq12_min);
    const auto b = departure_curve(p, f, DepartureMode::paper_case_study);
    EXPECT_LE(a.sigma(), b.sigma());
    EXPECT_EQ(a.rho(), b.rho());
  }
}

TEST_F(AnalysisProperties, OverallBoundCoversOwnTransmission) {
  for (int i = 0; i < 2000; ++i) {
    const auto [p, f] = random_case();
    const auto b = delay_bound_overall(p, f);
    EXPECT_GE(b.overall, f.frame_len() / p.capacity());
    EXPECT_EQ(b.overall, std::max(b.burst_bound, b.mean_bound));
  }
}

}  // namespace
}  // namespace wrrnc
