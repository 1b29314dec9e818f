#include "wrrnc/cli/report.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <ostream>

namespace wrrnc::cli {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_us(seconds s) { return fmt::format("{:.1f}", to_microseconds(s)); }
std::string format_mbps(bits_per_second r) { return fmt::format("{:.3f}", to_mbps(r)); }
std::string format_bits(bits b) { return fmt::format("{:.3f}", b); }

void render_analysis(std::ostream& out, const std::vector<PathReport>& paths,
                     const std::vector<AnalysisFailure>& failures, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "flow,row,hop,port,w1,w2,sigma_in_bits,rho_in_bps,burst_us,mean_us,pessimistic_mean_us,bound_us,"
           "sigma_out_bits,rho_out_bps,bg_mbps,deadline_us,deadline_met\n";
    for (const PathReport& p : paths) {
      for (std::size_t i = 0; i < p.hops.size(); ++i) {
        const HopReport& h = p.hops[i];
        out << fmt::format("{},hop,{},{},{},{},{},{},{},{},{},{},{},{},{},,\n", p.flow, i + 1, h.port.str(),
                           h.config.w1(), h.config.w2(), format_bits(h.arrival.sigma()),
                           format_bits(h.arrival.rho()), format_us(h.bound.burst_bound),
                           format_us(h.bound.mean_bound),
                           h.bound.pessimistic_mean_bound ? format_us(*h.bound.pessimistic_mean_bound) : "",
                           format_us(h.bound.overall), format_bits(h.departure.sigma()),
                           format_bits(h.departure.rho()), format_mbps(h.bg_bandwidth));
      }
      out << fmt::format("{},path,,,,,,,,,,{},,,{},{},{}\n", p.flow, format_us(p.end_to_end),
                         format_mbps(p.min_bg_bandwidth), format_us(p.deadline), yes_no(p.deadline_met));
    }
    for (const AnalysisFailure& f : failures) {
      out << fmt::format("{},error,,{},,,,,,,,,,,,,false\n", f.flow, csv_quote(f.code + ": " + f.message));
    }
    return;
  }

  for (const PathReport& p : paths) {
    out << fmt::format("flow {}\n", p.flow);
    out << fmt::format("{:>3}  {:<10} {:>3} {:>3} {:>14} {:>12} {:>10} {:>10} {:>12} {:>10} {:>14} {:>9}\n", "hop",
                       "port", "w1", "w2", "sigma_in[bit]", "rho[b/s]", "burst[us]", "mean[us]", "mean_pess[us]",
                       "bound[us]", "sigma_out[bit]", "bg[Mb/s]");
    for (std::size_t i = 0; i < p.hops.size(); ++i) {
      const HopReport& h = p.hops[i];
      out << fmt::format("{:>3}  {:<10} {:>3} {:>3} {:>14} {:>12} {:>10} {:>10} {:>12} {:>10} {:>14} {:>9}\n", i + 1,
                         h.port.str(), h.config.w1(), h.config.w2(), format_bits(h.arrival.sigma()),
                         format_bits(h.arrival.rho()), format_us(h.bound.burst_bound),
                         format_us(h.bound.mean_bound),
                         h.bound.pessimistic_mean_bound ? format_us(*h.bound.pessimistic_mean_bound) : "-",
                         format_us(h.bound.overall), format_bits(h.departure.sigma()),
                         format_mbps(h.bg_bandwidth));
    }
    out << fmt::format("end-to-end bound: {} us (deadline {} us: {})\n", format_us(p.end_to_end),
                       format_us(p.deadline), p.deadline_met ? "met" : "MISSED");
    out << fmt::format("background bandwidth (path minimum): {} Mb/s\n\n", format_mbps(p.min_bg_bandwidth));
  }
  for (const AnalysisFailure& f : failures) {
    out << fmt::format("flow {}: {} {}\n", f.flow, f.code, f.message);
  }
}

void render_plan(std::ostream& out, const std::vector<WeightPlan>& plans, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "flow,row,port,w1,w2,bound_us,bg_mbps,feasible,note\n";
    for (const WeightPlan& p : plans) {
      for (const WeightAssignment& a : p.assignments) {
        out << fmt::format("{},hop,{},{},{},{},{},,\n", p.flow, a.port.str(), a.w1, a.w2, format_us(a.bound),
                           format_mbps(a.bg_bandwidth));
      }
      if (p.feasible) {
        out << fmt::format("{},plan,,,,{},{},true,\n", p.flow, format_us(p.end_to_end_bound),
                           format_mbps(p.min_bg_bandwidth));
      } else {
        out << fmt::format("{},plan,,,,,,false,\n", p.flow);
      }
      for (const Diagnostic& d : p.issues) {
        out << fmt::format("{},issue,,,,,,false,{}\n", p.flow, csv_quote(d.code + ": " + d.message));
      }
    }
    return;
  }
  for (const WeightPlan& p : plans) {
    out << fmt::format("flow {}: {}\n", p.flow, p.feasible ? "feasible" : "INFEASIBLE");
    if (!p.assignments.empty()) {
      out << fmt::format("  {:<10} {:>3} {:>3} {:>10} {:>9}\n", "port", "w1", "w2", "bound[us]", "bg[Mb/s]");
      for (const WeightAssignment& a : p.assignments) {
        out << fmt::format("  {:<10} {:>3} {:>3} {:>10} {:>9}\n", a.port.str(), a.w1, a.w2, format_us(a.bound),
                           format_mbps(a.bg_bandwidth));
      }
    }
    if (p.feasible) {
      out << fmt::format("  end-to-end bound: {} us, background bandwidth (path minimum): {} Mb/s\n",
                         format_us(p.end_to_end_bound), format_mbps(p.min_bg_bandwidth));
    }
    for (const Diagnostic& d : p.issues) out << fmt::format("  {}: {}\n", d.code, d.message);
  }
}

void render_simulation(std::ostream& out, const SimulationSummary& s, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "kind,flow,hop,port,bound_us,max_observed_us,samples,within_bound,control_mbps,background_mbps\n";
    for (const FlowComparison& f : s.flows) {
      for (std::size_t i = 0; i < f.hops.size(); ++i) {
        const HopComparison& h = f.hops[i];
        out << fmt::format("hop,{},{},{},{},{},{},{},,\n", f.flow, i + 1, h.port.str(), format_us(h.bound),
                           format_us(h.max_observed), h.samples, yes_no(h.max_observed <= h.bound + 1e-9));
      }
      out << fmt::format("path,{},,,{},{},{},{},,\n", f.flow, format_us(f.bound), format_us(f.max_observed),
                         f.samples, yes_no(f.max_observed <= f.bound + 1e-9));
    }
    for (const PortThroughput& p : s.ports) {
      out << fmt::format("port,,,{},,,,,{},{}\n", p.port.str(), format_mbps(p.control), format_mbps(p.background));
    }
    return;
  }
  out << fmt::format("simulation: {} seed(s) from {} x {:.3f} s\n", s.seeds, s.seed_base, s.duration);
  for (const FlowComparison& f : s.flows) {
    out << fmt::format("flow {}\n", f.flow);
    out << fmt::format("  {:>3}  {:<10} {:>10} {:>12} {:>9}  {}\n", "hop", "port", "bound[us]", "observed[us]",
                       "samples", "ok");
    for (std::size_t i = 0; i < f.hops.size(); ++i) {
      const HopComparison& h = f.hops[i];
      out << fmt::format("  {:>3}  {:<10} {:>10} {:>12} {:>9}  {}\n", i + 1, h.port.str(), format_us(h.bound),
                         format_us(h.max_observed), h.samples, h.max_observed <= h.bound + 1e-9 ? "yes" : "NO");
    }
    out << fmt::format("  {:>3}  {:<10} {:>10} {:>12} {:>9}  {}\n", "e2e", "", format_us(f.bound),
                       format_us(f.max_observed), f.samples, f.max_observed <= f.bound + 1e-9 ? "yes" : "NO");
  }
  out << "port throughput (mean over seeds)\n";
  out << fmt::format("  {:<10} {:>14} {:>17}\n", "port", "control[Mb/s]", "background[Mb/s]");
  for (const PortThroughput& p : s.ports) {
    out << fmt::format("  {:<10} {:>14} {:>17}\n", p.port.str(), format_mbps(p.control), format_mbps(p.background));
  }
}

void render_diagnostics(std::ostream& out, const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics) out << d.code << ": " << d.message << '\n';
}

}  // namespace wrrnc::cli
