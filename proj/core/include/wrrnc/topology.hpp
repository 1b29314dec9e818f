#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wrrnc/curves.hpp"
#include "wrrnc/units.hpp"
#include "wrrnc/wrr_analysis.hpp"

namespace wrrnc {

// Output port `index` of switch `sw`, written "sw.index".
struct PortId {
  std::string sw;
  int index = 0;

  std::string str() const;
  static std::optional<PortId> parse(std::string_view text);

  friend auto operator<=>(const PortId&, const PortId&) = default;
  friend bool operator==(const PortId&, const PortId&) = default;
};

// A link end: either a station ("st1") or a switch port ("sw1.3").
struct Endpoint {
  std::string node;
  std::optional<int> port;

  bool is_station() const noexcept { return !port.has_value(); }
  std::string str() const;
  static Endpoint parse(std::string_view text);

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Link {
  std::string name;
  Endpoint a;
  Endpoint b;
  bits_per_second capacity = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

// Weights and background frame bound of a port; capacity comes from its link.
struct PortSettings {
  int w1 = 1;
  int w2 = 1;
  bits max_bg_frame = 0.0;

  friend bool operator==(const PortSettings&, const PortSettings&) = default;
};

class Topology {
 public:
  Topology() = default;

  void add_link(Link link);
  void set_port(const PortId& id, PortSettings settings);

  const std::vector<Link>& links() const noexcept { return links_; }
  const std::map<PortId, PortSettings>& ports() const noexcept { return ports_; }

  bool has_port(const PortId& id) const { return ports_.contains(id); }
  const PortSettings& settings(const PortId& id) const;

  std::set<std::string> stations() const;
  std::set<std::string> switches() const;

  // Links touching a switch port; a valid topology has exactly one.
  std::vector<const Link*> links_at(const PortId& id) const;
  // The far end of the link attached to `id`, if exactly one link is attached.
  std::optional<Endpoint> peer(const PortId& id) const;
  // Capacity of the single link attached to `id`.
  bits_per_second port_capacity(const PortId& id) const;
  // Capacity of the link from `station` to any port of `sw`, if any.
  std::optional<bits_per_second> access_capacity(const std::string& station, const std::string& sw) const;

  PortConfig port_config(const PortId& id) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::vector<Link> links_;
  std::map<PortId, PortSettings> ports_;
};

enum class FlowClass { control, background };

// Always-backlogged source. Without a frame length, frames take the
// maximum background frame length of the port they enter.
struct SaturatingSource {
  std::optional<bits> frame_len;

  friend bool operator==(const SaturatingSource&, const SaturatingSource&) = default;
};

using FlowSource = std::variant<PeriodicSource, SaturatingSource>;

struct FlowSpec {
  std::string name;
  FlowClass cls = FlowClass::control;
  std::string src;
  std::string dst;
  FlowSource source = SaturatingSource{};
  std::vector<PortId> path;
  std::optional<seconds> deadline;

  const PeriodicSource* periodic() const { return std::get_if<PeriodicSource>(&source); }

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct Diagnostic {
  std::string code;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Empty iff the topology and flows are consistent. Codes:
// E_LINK_CAPACITY, E_LINK_SELF, E_NAME_CONFLICT, E_PORT_UNATTACHED,
// E_PORT_MULTIPLE_LINKS, E_PORT_WEIGHTS, E_PORT_FRAME, E_DUPLICATE_FLOW,
// E_UNKNOWN_STATION, E_PATH_EMPTY, E_PATH_UNKNOWN_PORT, E_PATH_DISCONTINUOUS,
// E_FLOW_SOURCE, E_DEADLINE, E_FLOW_OVERLOAD.
std::vector<Diagnostic> validate_topology(const Topology& topo, const std::vector<FlowSpec>& flows);

struct HopReport {
  PortId port;
  PortConfig config;
  AffineArrivalCurve arrival;
  HopDelayBound bound;
  AffineArrivalCurve departure;
  bits_per_second bg_bandwidth;
};

struct PathReport {
  std::string flow;
  std::vector<HopReport> hops;
  seconds end_to_end = 0.0;
  bits_per_second min_bg_bandwidth = 0.0;
  seconds deadline = 0.0;
  bool deadline_met = false;
};

// Bandwidth left to background traffic in a fully loaded cycle:
// C w2 tau_bar / (w1 tau + w2 tau_bar).
bits_per_second background_bandwidth(const PortConfig& port, bits control_frame_len);
bits_per_second control_bandwidth(const PortConfig& port, bits control_frame_len);

// The weight requirement violated at a hop, if any (burst drain or the
// steady-state forwarding requirement).
std::optional<std::string> weight_violation(const PortConfig& port, const ControlFlowAtPort& flow);

// Closed-form analysis of one hop without feasibility checks beyond those the
// bounds themselves need.
HopReport analyze_hop(const PortId& id, const PortConfig& port, const ControlFlowAtPort& flow,
                      DepartureMode mode);

// Hop-by-hop analysis of a control flow: each hop's arrival is the previous
// hop's departure; end_to_end is the sum of hop bounds. Throws
// SaturationError naming the hop when weights are insufficient.
PathReport propagate_analysis(const Topology& topo, const FlowSpec& flow,
                              DepartureMode mode = DepartureMode::paper_case_study);

}  // namespace wrrnc
