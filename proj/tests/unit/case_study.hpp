#pragma once

#include <vector>

#include "wrrnc/topology.hpp"

namespace wrrnc::testing {

inline constexpr double kCapacity = 1e7;
inline constexpr double kControlFrame = 72 * 8;
inline constexpr double kBgFrame = 1526 * 8;
inline constexpr double kPeriod = 5e-3;
inline constexpr double kUs = 1e-6;

inline PortId pid(const char* sw, int index) { return PortId{sw, index}; }

// st1 -> sw1.3 -> sw2.3 -> st4 with background st2 -> st3 and st3 -> st4.
inline Topology case_study_topology(int w1a = 2, int w2a = 1, int w1b = 9, int w2b = 2) {
  Topology t;
  t.add_link({"l1", Endpoint::parse("st1"), Endpoint::parse("sw1.1"), kCapacity});
  t.add_link({"l2", Endpoint::parse("st2"), Endpoint::parse("sw1.2"), kCapacity});
  t.add_link({"l3", Endpoint::parse("sw1.3"), Endpoint::parse("sw2.1"), kCapacity});
  t.add_link({"l4", Endpoint::parse("st3"), Endpoint::parse("sw2.2"), kCapacity});
  t.add_link({"l5", Endpoint::parse("sw2.3"), Endpoint::parse("st4"), kCapacity});
  t.set_port(pid("sw1", 3), {w1a, w2a, kBgFrame});
  t.set_port(pid("sw2", 2), {1, 1, kBgFrame});
  t.set_port(pid("sw2", 3), {w1b, w2b, kBgFrame});
  return t;
}

inline FlowSpec control_flow(double deadline = 5e-3) {
  FlowSpec f;
  f.name = "rt";
  f.cls = FlowClass::control;
  f.src = "st1";
  f.dst = "st4";
  f.source = PeriodicSource(kControlFrame, kPeriod);
  f.path = {pid("sw1", 3), pid("sw2", 3)};
  f.deadline = deadline;
  return f;
}

inline std::vector<FlowSpec> case_study_flows(double deadline = 5e-3) {
  FlowSpec bg1;
  bg1.name = "bg1";
  bg1.cls = FlowClass::background;
  bg1.src = "st2";
  bg1.dst = "st3";
  bg1.path = {pid("sw1", 3), pid("sw2", 2)};
  FlowSpec bg2;
  bg2.name = "bg2";
  bg2.cls = FlowClass::background;
  bg2.src = "st3";
  bg2.dst = "st4";
  bg2.path = {pid("sw2", 3)};
  return {control_flow(deadline), bg1, bg2};
}

}  // namespace wrrnc::testing
