#include "wrrnc/simulator.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <unordered_map>

#include "wrrnc/errors.hpp"

namespace wrrnc {

namespace {

constexpr int kQueues = 2;
constexpr int kControlQueue = 0;
constexpr int kBackgroundQueue = 1;

struct EventOrder {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    // priority_queue keeps the greatest on top: invert.
    return std::tie(a.time, a.kind, a.frame, a.seq) > std::tie(b.time, b.kind, b.frame, b.seq);
  }
};

struct Frame {
  std::size_t flow;
  bits length;
  std::size_t hop = 0;
  seconds first_arrival = 0.0;
  seconds hop_arrival = 0.0;
  bool synthetic = false;
  std::uint64_t emission = 0;  // index among the source's emissions
};

struct Feed {
  std::size_t flow;
  bits length;
};

struct PortState {
  PortId id;
  std::size_t index = 0;
  bits_per_second capacity;
  std::array<int, kQueues> weight;
  std::array<std::deque<std::uint64_t>, kQueues> queue;
  std::array<std::vector<Feed>, kQueues> feeds;
  std::array<std::size_t, kQueues> next_feed{};

  int current = kControlQueue;
  int served = 0;
  int allowance = 0;
  bool visit_open = false;
  std::uint64_t visits = 0;

  bool busy = false;
  std::uint64_t in_service = 0;
  int in_service_queue = 0;
  std::uint64_t in_service_visit = 0;
  seconds tx_start = 0.0;

  bool available(int q) const { return !queue[q].empty() || !feeds[q].empty(); }
};

struct FlowRuntime {
  const FlowSpec* spec;
  std::vector<std::size_t> ports;  // port index per hop
  int queue;
  std::optional<PeriodicSource> periodic;
  seconds phase = 0.0;
  seconds access_time = 0.0;  // transmission over the station's access link
};

class Simulation {
 public:
  Simulation(const Topology& topo, const std::vector<FlowSpec>& flows, const SimOptions& options)
      : options_(options) {
    if (!(options.duration > 0.0)) throw DomainError("simulation duration must be positive");
    build_ports(topo);
    build_flows(topo, flows);
  }

  SimTrace run() {
    for (std::size_t f = 0; f < flows_.size(); ++f) {
      if (flows_[f].periodic) schedule_emission(f, 0);
    }
    // Saturating sources keep their port busy from the start.
    for (std::size_t p = 0; p < ports_.size(); ++p) {
      if (!ports_[p].feeds[kControlQueue].empty() || !ports_[p].feeds[kBackgroundQueue].empty()) start_next(p, 0.0);
    }
    while (!events_.empty()) {
      const SimEvent ev = events_.top();
      if (ev.time > options_.duration) break;
      events_.pop();
      if (ev.kind == EventKind::frame_arrival) {
        on_arrival(ev);
      } else {
        on_complete(ev);
      }
    }
    finish();
    return std::move(trace_);
  }

 private:
  void build_ports(const Topology& topo) {
    for (const auto& [id, _] : topo.ports()) {
      const PortConfig cfg = topo.port_config(id);
      PortState s;
      s.id = id;
      s.index = ports_.size();
      s.capacity = cfg.capacity();
      s.weight = {cfg.w1(), cfg.w2()};
      port_index_.emplace(id.str(), ports_.size());
      ports_.push_back(std::move(s));
      trace_.ports.push_back(PortTrace{.port = id});
    }
  }

  void build_flows(const Topology& topo, const std::vector<FlowSpec>& flows) {
    std::mt19937_64 rng(options_.seed);
    for (const FlowSpec& spec : flows) {
      if (spec.path.empty()) throw DomainError("flow " + spec.name + " has an empty path", "E_PATH_EMPTY");
      FlowRuntime rt{&spec, {}, spec.cls == FlowClass::control ? kControlQueue : kBackgroundQueue, {}, 0.0, 0.0};
      for (const PortId& hop : spec.path) {
        const auto it = port_index_.find(hop.str());
        if (it == port_index_.end()) {
          throw DomainError("flow " + spec.name + " references unknown port " + hop.str(), "E_PATH_UNKNOWN_PORT");
        }
        rt.ports.push_back(it->second);
      }
      if (const PeriodicSource* p = spec.periodic()) {
        rt.periodic = *p;
        // 53 random bits, identical on every platform.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        rt.phase = u * p->period();
        if (auto o = options_.phase_override.find(spec.name); o != options_.phase_override.end()) {
          rt.phase = o->second;
        }
        const auto access = topo.access_capacity(spec.src, spec.path.front().sw);
        if (!access) {
          throw DomainError("station " + spec.src + " is not linked to " + spec.path.front().sw,
                            "E_PATH_DISCONTINUOUS");
        }
        rt.access_time = p->frame_len() / *access;
      } else {
        const auto& sat = std::get<SaturatingSource>(spec.source);
        PortState& first = ports_[rt.ports.front()];
        bits len = 0.0;
        if (sat.frame_len) {
          len = *sat.frame_len;
        } else {
          len = topo.settings(first.id).max_bg_frame;
        }
        if (!(len > 0.0)) throw DomainError("flow " + spec.name + " needs a positive frame length");
        first.feeds[rt.queue].push_back(Feed{flows_.size(), len});
      }
      flows_.push_back(rt);

      FlowTrace ft;
      ft.flow = spec.name;
      ft.cls = spec.cls;
      ft.path = spec.path;
      ft.hop_delays.resize(spec.path.size());
      trace_.flows.push_back(std::move(ft));
    }
  }

  void push(seconds time, EventKind kind, std::uint64_t frame, std::size_t port) {
    events_.push(SimEvent{time, kind, frame, port, seq_++});
  }

  void schedule_emission(std::size_t f, std::uint64_t n) {
    const FlowRuntime& rt = flows_[f];
    const seconds created = rt.phase + static_cast<double>(n) * rt.periodic->period();
    if (created >= options_.duration) return;
    const std::uint64_t id = next_id_++;
    frames_.emplace(id, Frame{f, rt.periodic->frame_len(), 0, 0.0, 0.0, false, n});
    ++trace_.flows[f].generated;
    push(created + rt.access_time, EventKind::frame_arrival, id, rt.ports.front());
  }

  void on_arrival(const SimEvent& ev) {
    Frame& fr = frames_.at(ev.frame);
    fr.hop_arrival = ev.time;
    if (fr.hop == 0) {
      fr.first_arrival = ev.time;
      if (flows_[fr.flow].periodic) schedule_emission(fr.flow, fr.emission + 1);
    }
    PortState& port = ports_[ev.port];
    auto& q = port.queue[flows_[fr.flow].queue];
    q.push_back(ev.frame);
    if (q.size() > options_.max_queue_frames) {
      throw SaturationError("queue exceeded " + std::to_string(options_.max_queue_frames) + " frames",
                            port.id.str());
    }
    if (!port.busy) start_next(ev.port, ev.time);
  }

  void on_complete(const SimEvent& ev) {
    PortState& port = ports_[ev.port];
    Frame& fr = frames_.at(ev.frame);
    const FlowRuntime& rt = flows_[fr.flow];
    FlowTrace& ft = trace_.flows[fr.flow];
    PortTrace& pt = trace_.ports[ev.port];

    ft.hop_delays[fr.hop].push_back(ev.time - fr.hop_arrival);
    if (port.in_service_queue == kControlQueue) {
      pt.control_bits += fr.length;
      ++pt.control_frames;
    } else {
      pt.background_bits += fr.length;
      ++pt.background_frames;
    }
    if (options_.record_frames) {
      trace_.records.push_back(FrameRecord{ev.frame, rt.spec->name, fr.hop + 1, port.id, port.in_service_queue + 1,
                                           port.in_service_visit, fr.hop_arrival, port.tx_start, ev.time,
                                           fr.synthetic});
    }

    if (fr.hop + 1 < rt.ports.size()) {
      ++fr.hop;
      push(ev.time, EventKind::frame_arrival, ev.frame, rt.ports[fr.hop]);
    } else {
      ft.end_to_end.push_back(ev.time - fr.first_arrival);
      frames_.erase(ev.frame);
    }

    port.busy = false;
    start_next(ev.port, ev.time);
  }

  std::optional<int> select(PortState& s) {
    for (int step = 0; step < 2 * kQueues; ++step) {
      const int q = s.current;
      if (!s.visit_open) {
        s.visit_open = true;
        s.served = 0;
        ++s.visits;
        if (q == kControlQueue) ++trace_.ports[s.index].cycles;
        if (options_.gating == VisitGating::open || !s.feeds[q].empty()) {
          s.allowance = s.weight[q];
        } else {
          s.allowance = static_cast<int>(std::min<std::size_t>(s.weight[q], s.queue[q].size()));
        }
      }
      if (s.served < s.allowance && s.available(q)) {
        ++s.served;
        return q;
      }
      s.visit_open = false;
      s.current = (q + 1) % kQueues;
    }
    return std::nullopt;
  }

  std::uint64_t take(PortState& s, int q, seconds now) {
    if (!s.queue[q].empty()) {
      const std::uint64_t id = s.queue[q].front();
      s.queue[q].pop_front();
      return id;
    }
    const Feed feed = s.feeds[q][s.next_feed[q]];
    s.next_feed[q] = (s.next_feed[q] + 1) % s.feeds[q].size();
    const std::uint64_t id = next_id_++;
    frames_.emplace(id, Frame{feed.flow, feed.length, 0, now, now, true, 0});
    ++trace_.flows[feed.flow].generated;
    return id;
  }

  void start_next(std::size_t index, seconds now) {
    PortState& s = ports_[index];
    const auto q = select(s);
    if (!q) return;
    const std::uint64_t id = take(s, *q, now);
    s.busy = true;
    s.in_service = id;
    s.in_service_queue = *q;
    s.in_service_visit = s.visits;
    s.tx_start = now;
    push(now + frames_.at(id).length / s.capacity, EventKind::transmission_complete, id, index);
  }

  void finish() {
    trace_.seed = options_.seed;
    trace_.duration = options_.duration;
    for (FlowTrace& ft : trace_.flows) {
      ft.hop_max.clear();
      for (const auto& samples : ft.hop_delays) {
        ft.hop_max.push_back(samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end()));
      }
      ft.max_end_to_end = ft.end_to_end.empty() ? 0.0 : *std::max_element(ft.end_to_end.begin(), ft.end_to_end.end());
    }
  }

  SimOptions options_;
  std::vector<PortState> ports_;
  std::unordered_map<std::string, std::size_t> port_index_;
  std::vector<FlowRuntime> flows_;
  std::unordered_map<std::uint64_t, Frame> frames_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> events_;
  std::uint64_t seq_ = 0;
  std::uint64_t next_id_ = 0;
  SimTrace trace_;
};

void append_fixed(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 9);
  out.append(buf, res.ptr);
}

}  // namespace

const FlowTrace* SimTrace::find_flow(std::string_view name) const {
  for (const FlowTrace& f : flows) {
    if (f.flow == name) return &f;
  }
  return nullptr;
}

const PortTrace* SimTrace::find_port(const PortId& id) const {
  for (const PortTrace& p : ports) {
    if (p.port == id) return &p;
  }
  return nullptr;
}

SimTrace run_simulation(const Topology& topo, const std::vector<FlowSpec>& flows, const SimOptions& options) {
  return Simulation(topo, flows, options).run();
}

ObservedDelays max_observed_delay(const SimTrace& trace, std::string_view flow) {
  const FlowTrace* ft = trace.find_flow(flow);
  if (!ft) throw Error("E_UNKNOWN_FLOW", "no flow named " + std::string(flow) + " in trace");
  if (ft->end_to_end.empty()) throw Error("E_NO_SAMPLES", "flow " + std::string(flow) + " completed no frames");
  ObservedDelays out;
  for (const auto& samples : ft->hop_delays) {
    out.per_hop.push_back(samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end()));
  }
  out.end_to_end = *std::max_element(ft->end_to_end.begin(), ft->end_to_end.end());
  return out;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "frame_id,flow,hop,arrival_s,depart_s,delay_s\n";
  std::string line;
  for (const FrameRecord& r : trace.records) {
    line.clear();
    line += std::to_string(r.frame_id);
    line += ',';
    line += r.flow;
    line += ',';
    line += std::to_string(r.hop);
    line += ',';
    append_fixed(line, r.arrival);
    line += ',';
    append_fixed(line, r.depart);
    line += ',';
    append_fixed(line, r.depart - r.arrival);
    line += '\n';
    out << line;
  }
}

}  // namespace wrrnc
