#include "wrrnc/topology.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "wrrnc/errors.hpp"

namespace wrrnc {

std::string PortId::str() const { return sw + "." + std::to_string(index); }

std::optional<PortId> PortId::parse(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) return std::nullopt;
  int index = 0;
  const char* first = text.data() + dot + 1;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec != std::errc{} || ptr != last || index < 0) return std::nullopt;
  return PortId{std::string(text.substr(0, dot)), index};
}

std::string Endpoint::str() const { return port ? node + "." + std::to_string(*port) : node; }

Endpoint Endpoint::parse(std::string_view text) {
  if (auto id = PortId::parse(text)) return Endpoint{id->sw, id->index};
  return Endpoint{std::string(text), std::nullopt};
}

void Topology::add_link(Link link) { links_.push_back(std::move(link)); }

void Topology::set_port(const PortId& id, PortSettings settings) { ports_[id] = settings; }

const PortSettings& Topology::settings(const PortId& id) const {
  const auto it = ports_.find(id);
  if (it == ports_.end()) throw DomainError("unknown port " + id.str(), "E_PATH_UNKNOWN_PORT");
  return it->second;
}

std::set<std::string> Topology::stations() const {
  std::set<std::string> out;
  for (const Link& l : links_) {
    for (const Endpoint* e : {&l.a, &l.b}) {
      if (e->is_station()) out.insert(e->node);
    }
  }
  return out;
}

std::set<std::string> Topology::switches() const {
  std::set<std::string> out;
  for (const Link& l : links_) {
    for (const Endpoint* e : {&l.a, &l.b}) {
      if (!e->is_station()) out.insert(e->node);
    }
  }
  for (const auto& [id, _] : ports_) out.insert(id.sw);
  return out;
}

std::vector<const Link*> Topology::links_at(const PortId& id) const {
  const Endpoint end{id.sw, id.index};
  std::vector<const Link*> out;
  for (const Link& l : links_) {
    if (l.a == end || l.b == end) out.push_back(&l);
  }
  return out;
}

std::optional<Endpoint> Topology::peer(const PortId& id) const {
  const auto attached = links_at(id);
  if (attached.size() != 1) return std::nullopt;
  const Endpoint end{id.sw, id.index};
  return attached.front()->a == end ? attached.front()->b : attached.front()->a;
}

bits_per_second Topology::port_capacity(const PortId& id) const {
  const auto attached = links_at(id);
  if (attached.size() != 1) {
    throw DomainError("port " + id.str() + " must be attached to exactly one link", "E_PORT_UNATTACHED");
  }
  return attached.front()->capacity;
}

std::optional<bits_per_second> Topology::access_capacity(const std::string& station,
                                                         const std::string& sw) const {
  for (const Link& l : links_) {
    const bool forward = l.a.is_station() && l.a.node == station && !l.b.is_station() && l.b.node == sw;
    const bool backward = l.b.is_station() && l.b.node == station && !l.a.is_station() && l.a.node == sw;
    if (forward || backward) return l.capacity;
  }
  return std::nullopt;
}

PortConfig Topology::port_config(const PortId& id) const {
  const PortSettings& s = settings(id);
  return PortConfig(port_capacity(id), s.w1, s.w2, s.max_bg_frame);
}

namespace {

void check_links(const Topology& topo, std::vector<Diagnostic>& out) {
  for (const Link& l : topo.links()) {
    if (!(l.capacity > 0.0)) {
      out.push_back({"E_LINK_CAPACITY", "link " + l.name + " has nonpositive capacity"});
    }
    if (l.a == l.b) out.push_back({"E_LINK_SELF", "link " + l.name + " connects an endpoint to itself"});
  }
  const auto stations = topo.stations();
  for (const std::string& sw : topo.switches()) {
    if (stations.contains(sw)) {
      out.push_back({"E_NAME_CONFLICT", "name " + sw + " is used both as a station and a switch"});
    }
  }
}

void check_ports(const Topology& topo, std::vector<Diagnostic>& out) {
  for (const auto& [id, s] : topo.ports()) {
    const auto attached = topo.links_at(id);
    if (attached.empty()) {
      out.push_back({"E_PORT_UNATTACHED", "port " + id.str() + " is not attached to any link"});
    } else if (attached.size() > 1) {
      out.push_back({"E_PORT_MULTIPLE_LINKS", "port " + id.str() + " is attached to several links"});
    }
    if (s.w1 < 1 || s.w2 < 1) {
      out.push_back({"E_PORT_WEIGHTS", "port " + id.str() + " needs integer weights >= 1"});
    }
    if (!(s.max_bg_frame > 0.0)) {
      out.push_back({"E_PORT_FRAME", "port " + id.str() + " needs a positive max background frame"});
    }
  }
}

// Paths must chain src -> first switch -> ... -> dst over declared links.
bool check_path(const Topology& topo, const FlowSpec& f, std::vector<Diagnostic>& out) {
  if (f.path.empty()) {
    out.push_back({"E_PATH_EMPTY", "flow " + f.name + " has an empty path"});
    return false;
  }
  bool ok = true;
  for (const PortId& hop : f.path) {
    if (!topo.has_port(hop)) {
      out.push_back({"E_PATH_UNKNOWN_PORT", "flow " + f.name + " references unknown port " + hop.str()});
      ok = false;
    }
  }
  if (!ok) return false;

  if (!topo.access_capacity(f.src, f.path.front().sw)) {
    out.push_back({"E_PATH_DISCONTINUOUS",
                   "flow " + f.name + ": station " + f.src + " is not linked to switch " + f.path.front().sw});
    ok = false;
  }
  for (std::size_t i = 0; i < f.path.size(); ++i) {
    const auto next = topo.peer(f.path[i]);
    if (!next) {
      ok = false;  // reported by check_ports
      continue;
    }
    const bool last = i + 1 == f.path.size();
    const bool chained = last ? (next->is_station() && next->node == f.dst)
                              : (!next->is_station() && next->node == f.path[i + 1].sw);
    if (!chained) {
      out.push_back({"E_PATH_DISCONTINUOUS", "flow " + f.name + ": port " + f.path[i].str() +
                                                 " leads to " + next->str() + ", not " +
                                                 (last ? f.dst : f.path[i + 1].sw)});
      ok = false;
    }
  }
  return ok;
}

void check_control(const Topology& topo, const FlowSpec& f, bool path_ok, std::vector<Diagnostic>& out) {
  const PeriodicSource* src = f.periodic();
  if (!src || !(src->frame_len() > 0.0)) {
    out.push_back({"E_FLOW_SOURCE", "control flow " + f.name + " needs a periodic source with frames > 0"});
    return;
  }
  if (!f.deadline || !(*f.deadline > 0.0)) {
    out.push_back({"E_DEADLINE", "control flow " + f.name + " needs a positive deadline"});
  }
  if (!path_ok) return;
  for (const PortId& hop : f.path) {
    const auto attached = topo.links_at(hop);
    if (attached.size() != 1) continue;
    const bits_per_second c = attached.front()->capacity;
    if (src->rate() >= c) {
      out.push_back({"E_FLOW_OVERLOAD", "control flow " + f.name + " rate " + std::to_string(src->rate()) +
                                            " b/s is not below capacity of " + hop.str()});
      break;
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_topology(const Topology& topo, const std::vector<FlowSpec>& flows) {
  std::vector<Diagnostic> out;
  check_links(topo, out);
  check_ports(topo, out);

  const auto stations = topo.stations();
  std::set<std::string> names;
  for (const FlowSpec& f : flows) {
    if (!names.insert(f.name).second) {
      out.push_back({"E_DUPLICATE_FLOW", "flow " + f.name + " is declared more than once"});
    }
    for (const std::string* st : {&f.src, &f.dst}) {
      if (!stations.contains(*st)) {
        out.push_back({"E_UNKNOWN_STATION", "flow " + f.name + " references unknown station " + *st});
      }
    }
    const bool path_ok = check_path(topo, f, out);
    if (f.cls == FlowClass::control) check_control(topo, f, path_ok, out);
  }
  return out;
}

bits_per_second background_bandwidth(const PortConfig& port, bits control_frame_len) {
  const seconds bg = port.w2() * port.tau_bar();
  const seconds ctl = port.w1() * control_frame_len / port.capacity();
  return port.capacity() * bg / (ctl + bg);
}

bits_per_second control_bandwidth(const PortConfig& port, bits control_frame_len) {
  const seconds bg = port.w2() * port.tau_bar();
  const seconds ctl = port.w1() * control_frame_len / port.capacity();
  return port.capacity() * ctl / (ctl + bg);
}

std::optional<std::string> weight_violation(const PortConfig& port, const ControlFlowAtPort& flow) {
  const int burst_min = min_weight_burst(port, flow, std::numeric_limits<int>::max() - 1);
  if (port.w1() < burst_min) {
    return "w1=" + std::to_string(port.w1()) + " < " + std::to_string(burst_min) +
           " required to drain the burst";
  }
  const int mean_min = min_weight_mean(port, flow);
  if (port.w1() < mean_min) {
    return "w1=" + std::to_string(port.w1()) + " < " + std::to_string(mean_min) +
           " required to forward steady-state arrivals";
  }
  return std::nullopt;
}

HopReport analyze_hop(const PortId& id, const PortConfig& port, const ControlFlowAtPort& flow,
                      DepartureMode mode) {
  return HopReport{
      .port = id,
      .config = port,
      .arrival = flow.arrival(),
      .bound = delay_bound_overall(port, flow),
      .departure = departure_curve(port, flow, mode),
      .bg_bandwidth = background_bandwidth(port, flow.frame_len()),
  };
}

PathReport propagate_analysis(const Topology& topo, const FlowSpec& flow, DepartureMode mode) {
  const PeriodicSource* src = flow.periodic();
  if (flow.cls != FlowClass::control || !src) {
    throw DomainError("flow " + flow.name + " is not a periodic control flow", "E_FLOW_SOURCE");
  }
  PathReport report;
  report.flow = flow.name;
  report.deadline = flow.deadline.value_or(std::numeric_limits<double>::infinity());
  report.min_bg_bandwidth = std::numeric_limits<double>::infinity();

  AffineArrivalCurve arrival = affine_from_periodic(*src);
  for (const PortId& hop : flow.path) {
    const PortConfig port = topo.port_config(hop);
    const ControlFlowAtPort at_port(src->frame_len(), arrival);
    try {
      if (auto why = weight_violation(port, at_port)) throw SaturationError(*why, hop.str());
      report.hops.push_back(analyze_hop(hop, port, at_port, mode));
    } catch (const SaturationError&) {
      throw;
    } catch (const Error& e) {
      throw SaturationError(e.what(), hop.str());
    }
    const HopReport& h = report.hops.back();
    report.end_to_end += h.bound.overall;
    report.min_bg_bandwidth = std::min(report.min_bg_bandwidth, h.bg_bandwidth);
    arrival = h.departure;
  }
  report.deadline_met = report.end_to_end <= report.deadline;
  return report;
}

}  // namespace wrrnc
