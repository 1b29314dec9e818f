#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "case_study.hpp"
#include "wrrnc/topology.hpp"

namespace wrrnc {
namespace {

using namespace wrrnc::testing;

bool has_code(const std::vector<Diagnostic>& d, const std::string& code) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

TEST(PortId, ParsesAndPrints) {
  const auto p = PortId::parse("sw1.3");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->sw, "sw1");
  EXPECT_EQ(p->index, 3);
  EXPECT_EQ(p->str(), "sw1.3");
  EXPECT_FALSE(PortId::parse("sw1"));
  EXPECT_FALSE(PortId::parse("sw1.x"));
  EXPECT_FALSE(PortId::parse(".3"));
  EXPECT_LT(pid("sw1", 3), pid("sw2", 1));
}

TEST(Endpoint, StationOrPort) {
  EXPECT_TRUE(Endpoint::parse("st1").is_station());
  const auto e = Endpoint::parse("sw2.3");
  EXPECT_FALSE(e.is_station());
  EXPECT_EQ(e.str(), "sw2.3");
}

TEST(Topology, NodesAndPeers) {
  const Topology t = case_study_topology();
  EXPECT_EQ(t.stations(), (std::set<std::string>{"st1", "st2", "st3", "st4"}));
  EXPECT_EQ(t.switches(), (std::set<std::string>{"sw1", "sw2"}));
  EXPECT_EQ(t.peer(pid("sw1", 3))->str(), "sw2.1");
  EXPECT_EQ(t.peer(pid("sw2", 3))->str(), "st4");
  EXPECT_DOUBLE_EQ(t.port_capacity(pid("sw1", 3)), kCapacity);
  EXPECT_EQ(t.access_capacity("st1", "sw1"), kCapacity);
  EXPECT_FALSE(t.access_capacity("st1", "sw2"));
  EXPECT_EQ(t.port_config(pid("sw2", 3)), PortConfig(kCapacity, 9, 2, kBgFrame));
}

TEST(ValidateTopology, CaseStudyIsValid) {
  EXPECT_TRUE(validate_topology(case_study_topology(), case_study_flows()).empty());
}

TEST(ValidateTopology, UnknownPortInPath) {
  auto flows = case_study_flows();
  flows[0].path.push_back(pid("sw9", 1));
  EXPECT_TRUE(has_code(validate_topology(case_study_topology(), flows), "E_PATH_UNKNOWN_PORT"));
}

TEST(ValidateTopology, ControlRateAtCapacityOverloads) {
  auto flows = case_study_flows();
  flows[0].source = PeriodicSource(kControlFrame, kControlFrame / kCapacity);
  EXPECT_TRUE(has_code(validate_topology(case_study_topology(), flows), "E_FLOW_OVERLOAD"));
}

TEST(ValidateTopology, StructuralErrors) {
  Topology t = case_study_topology();
  t.set_port(pid("sw3", 1), {1, 1, kBgFrame});
  t.add_link({"bad", Endpoint::parse("st9"), Endpoint::parse("st9"), 0.0});
  auto flows = case_study_flows();
  flows.push_back(flows[1]);
  flows[0].deadline.reset();
  flows[2].dst = "nowhere";
  const auto d = validate_topology(t, flows);
  for (const char* code : {"E_PORT_UNATTACHED", "E_LINK_CAPACITY", "E_LINK_SELF", "E_DUPLICATE_FLOW",
                           "E_DEADLINE", "E_UNKNOWN_STATION"}) {
    EXPECT_TRUE(has_code(d, code)) << code;
  }
}

TEST(ValidateTopology, DiscontinuousAndEmptyPaths) {
  auto flows = case_study_flows();
  flows[0].path = {pid("sw2", 3), pid("sw1", 3)};
  flows[1].path.clear();
  const auto d = validate_topology(case_study_topology(), flows);
  EXPECT_TRUE(has_code(d, "E_PATH_DISCONTINUOUS"));
  EXPECT_TRUE(has_code(d, "E_PATH_EMPTY"));
}

TEST(ValidateTopology, WeightsAndFrames) {
  Topology t = case_study_topology();
  t.set_port(pid("sw2", 2), {0, 1, 0.0});
  const auto d = validate_topology(t, case_study_flows());
  EXPECT_TRUE(has_code(d, "E_PORT_WEIGHTS"));
  EXPECT_TRUE(has_code(d, "E_PORT_FRAME"));
}

TEST(ValidateTopology, NameConflictAndSharedPort) {
  Topology t = case_study_topology();
  t.add_link({"l6", Endpoint::parse("sw1"), Endpoint::parse("sw2.2"), kCapacity});
  const auto d = validate_topology(t, case_study_flows());
  EXPECT_TRUE(has_code(d, "E_NAME_CONFLICT"));
  EXPECT_TRUE(has_code(d, "E_PORT_MULTIPLE_LINKS"));
}

TEST(ValidateTopology, ControlFlowNeedsPeriodicSource) {
  auto flows = case_study_flows();
  flows[0].source = SaturatingSource{};
  EXPECT_TRUE(has_code(validate_topology(case_study_topology(), flows), "E_FLOW_SOURCE"));
}

TEST(BackgroundBandwidth, CaseStudyValues) {
  EXPECT_NEAR(to_mbps(background_bandwidth(PortConfig(kCapacity, 2, 1, kBgFrame), kControlFrame)), 9.138, 0.001);
  EXPECT_NEAR(to_mbps(background_bandwidth(PortConfig(kCapacity, 9, 2, kBgFrame), kControlFrame)), 8.249, 0.001);
  // w1 tau = w2 tau_bar splits the cycle evenly.
  EXPECT_NEAR(background_bandwidth(PortConfig(kCapacity, 2, 1, 2 * kControlFrame), kControlFrame), kCapacity / 2,
              1e-6);
}

TEST(BackgroundBandwidth, SharesSumToCapacity) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(1, 30);
  std::uniform_real_distribution<double> len(64, 12208);
  for (int i = 0; i < 1000; ++i) {
    const PortConfig p(kCapacity, w(rng), w(rng), len(rng));
    const double L = len(rng);
    EXPECT_NEAR(background_bandwidth(p, L) + control_bandwidth(p, L), kCapacity, 1e-6);
  }
}

TEST(PropagateAnalysis, CaseStudy) {
  const PathReport r = propagate_analysis(case_study_topology(), control_flow());
  ASSERT_EQ(r.hops.size(), 2u);
  EXPECT_NEAR(r.hops[0].bound.overall, 1888.8 * kUs, 0.1 * kUs);
  EXPECT_NEAR(r.hops[1].bound.overall, 3099.4 * kUs, 1 * kUs);
  EXPECT_NEAR(r.end_to_end, 4988.2 * kUs, 1 * kUs);
  EXPECT_TRUE(r.deadline_met);
  EXPECT_NEAR(to_mbps(r.min_bg_bandwidth), 8.249, 0.001);
  EXPECT_EQ(r.hops[1].arrival, AffineArrivalCurve(1152, kControlFrame / kPeriod));
  EXPECT_EQ(r.hops[0].departure, r.hops[1].arrival);
}

TEST(PropagateAnalysis, SingleHop) {
  Topology t = case_study_topology();
  FlowSpec f = control_flow();
  f.dst = "st2";
  f.path = {pid("sw1", 2)};
  t.set_port(pid("sw1", 2), {2, 1, kBgFrame});
  const PathReport r = propagate_analysis(t, f);
  ASSERT_EQ(r.hops.size(), 1u);
  EXPECT_NEAR(r.end_to_end, 1888.8 * kUs, 0.1 * kUs);
}

TEST(PropagateAnalysis, UnderweightSecondHopSaturates) {
  // The 1152-bit burst at hop 2 needs w1 >= 3.
  try {
    propagate_analysis(case_study_topology(2, 1, 1, 1), control_flow());
    FAIL() << "expected SaturationError";
  } catch (const SaturationError& e) {
    EXPECT_EQ(e.where(), "sw2.3");
    EXPECT_EQ(e.code(), "E_SATURATED");
  }
}

TEST(PropagateAnalysis, TightDeadlineIsMissed) {
  const PathReport r = propagate_analysis(case_study_topology(), control_flow(4e-3));
  EXPECT_FALSE(r.deadline_met);
}

TEST(PropagateAnalysis, RejectsBackgroundFlows) {
  EXPECT_THROW(propagate_analysis(case_study_topology(), case_study_flows()[1]), DomainError);
}

class PathProperties : public ::testing::TestWithParam<DepartureMode> {};

TEST_P(PathProperties, AdditiveAndBurstGrowthBounded) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> w1(1, 30);
  std::uniform_int_distribution<int> w2(1, 4);
  int analyzed = 0;
  for (int i = 0; i < 500; ++i) {
    const Topology t = case_study_topology(w1(rng), w2(rng), w1(rng), w2(rng));
    PathReport r;
    try {
      r = propagate_analysis(t, control_flow(), GetParam());
    } catch (const SaturationError&) {
      continue;
    }
    ++analyzed;
    double sum = 0.0;
    for (const HopReport& h : r.hops) {
      sum += h.bound.overall;
      if (GetParam() == DepartureMode::eq12_min) {
        EXPECT_LE(h.departure.sigma(), h.arrival.sigma() + h.arrival.rho() * h.config.w2() * h.config.tau_bar());
      }
      EXPECT_EQ(h.departure, departure_curve(h.config, ControlFlowAtPort(kControlFrame, h.arrival), GetParam()));
    }
    EXPECT_EQ(r.end_to_end, sum);
    EXPECT_EQ(r.deadline_met, r.end_to_end <= 5e-3);
  }
  EXPECT_GT(analyzed, 100);
}

INSTANTIATE_TEST_SUITE_P(BothModes, PathProperties,
                         ::testing::Values(DepartureMode::eq12_min, DepartureMode::paper_case_study));

}  // namespace
}  // namespace wrrnc
