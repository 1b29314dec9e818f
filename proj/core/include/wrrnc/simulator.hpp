#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wrrnc/topology.hpp"
#include "wrrnc/units.hpp"

namespace wrrnc {

// Whether a frame that reaches a queue while that queue is being visited
// may still be served in the same visit.
enum class VisitGating {
  open,    // yes, while the visit has quota left
  closed,  // no, the visit's allowance is fixed when it starts
};

struct SimOptions {
  seconds duration = 10.0;
  std::uint64_t seed = 1;
  VisitGating gating = VisitGating::open;
  // A queue longer than this raises SaturationError naming the port.
  std::size_t max_queue_frames = 100000;
  bool record_frames = false;
  // First emission time per periodic flow, replacing the seeded offset.
  std::map<std::string, seconds> phase_override;
};

enum class EventKind : std::uint8_t { frame_arrival = 0, transmission_complete = 1 };

struct SimEvent {
  seconds time;
  EventKind kind;
  std::uint64_t frame;
  std::size_t port;
  std::uint64_t seq;
};

// One frame crossing one port. `queue` is 1 for control, 2 for background;
// `visit` numbers the scheduler visits of that port. Synthetic frames come
// from saturating sources and have no separate arrival.
struct FrameRecord {
  std::uint64_t frame_id;
  std::string flow;
  std::size_t hop;  // 1-based position on the flow's path
  PortId port;
  int queue;
  std::uint64_t visit;
  seconds arrival;
  seconds tx_start;
  seconds depart;
  bool synthetic;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct FlowTrace {
  std::string flow;
  FlowClass cls = FlowClass::control;
  std::vector<PortId> path;
  std::uint64_t generated = 0;
  // hop_delays[h] holds one sample per frame that finished hop h.
  std::vector<std::vector<seconds>> hop_delays;
  std::vector<seconds> end_to_end;
  std::vector<seconds> hop_max;
  seconds max_end_to_end = 0.0;

  friend bool operator==(const FlowTrace&, const FlowTrace&) = default;
};

struct PortTrace {
  PortId port;
  bits control_bits = 0.0;
  bits background_bits = 0.0;
  std::uint64_t control_frames = 0;
  std::uint64_t background_frames = 0;
  std::uint64_t cycles = 0;  // visits to the control queue

  friend bool operator==(const PortTrace&, const PortTrace&) = default;
};

struct SimTrace {
  std::uint64_t seed = 0;
  seconds duration = 0.0;
  std::vector<FlowTrace> flows;
  std::vector<PortTrace> ports;
  std::vector<FrameRecord> records;

  const FlowTrace* find_flow(std::string_view name) const;
  const PortTrace* find_port(const PortId& id) const;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

// Discrete-event run of every WRR port in `topo`. Control sources emit one
// frame per period from a seeded offset in [0, period); saturating sources
// keep their queue at the first hop permanently backlogged. Per-hop delay is
// measured from full reception at the output queue to the last bit sent.
SimTrace run_simulation(const Topology& topo, const std::vector<FlowSpec>& flows, const SimOptions& options);

struct ObservedDelays {
  std::vector<seconds> per_hop;
  seconds end_to_end = 0.0;
};

// Maxima over completed frames. Throws Error E_UNKNOWN_FLOW or E_NO_SAMPLES.
ObservedDelays max_observed_delay(const SimTrace& trace, std::string_view flow);

// frame_id,flow,hop,arrival_s,depart_s,delay_s with 9 fractional digits.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace wrrnc
