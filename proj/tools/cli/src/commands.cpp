#include "wrrnc/cli/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>

#include "wrrnc/cli/config.hpp"
#include "wrrnc/cli/report.hpp"

namespace wrrnc::cli {

namespace {

constexpr double kBoundTolerance = 1e-9;  // seconds

struct Options {
  std::string config;
  std::string format = "table";
  std::string flow;
  std::string mode = "paper";
  std::string departure = "paper";
  std::vector<int> w2;
  int w1_cap = kDefaultW1Cap;
  double duration = 10.0;
  int seeds = 20;
  std::uint64_t seed_base = 1;
  std::string gating = "open";
  std::string trace;
  bool strict = false;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto log = std::make_shared<spdlog::logger>("wrrnc", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("WRRNC_LOG"); env && *env) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      log->warn("WRRNC_LOG={} is not a level name; using warn", env);
    } else {
      log->set_level(level);
    }
  }
  return log;
}

OutputFormat output_format(const Options& o) { return o.format == "csv" ? OutputFormat::csv : OutputFormat::table; }

DepartureMode departure_mode(const Options& o) {
  return o.departure == "eq12" ? DepartureMode::eq12_min : DepartureMode::paper_case_study;
}

class Session {
 public:
  Session(const Options& o, std::ostream& out, std::ostream& err, spdlog::logger& log)
      : opt_(o), out_(out), err_(err), log_(log) {}

  int validate() {
    if (!load()) return kExitUsage;
    out_ << fmt::format("ok: {} links, {} ports, {} flows\n", doc_.topology.links().size(),
                        doc_.topology.ports().size(), doc_.flows.size());
    return kExitOk;
  }

  int analyze() {
    if (!load()) return kExitUsage;
    const auto flows = selected();
    if (!flows) return kExitUsage;
    std::vector<PathReport> paths;
    std::vector<AnalysisFailure> failures;
    analyze_all(*flows, paths, failures);
    if (opt_.strict) check_k(paths);
    render_analysis(out_, paths, failures, output_format(opt_));
    if (!failures.empty()) return kExitSaturated;
    const bool all_met = std::all_of(paths.begin(), paths.end(), [](const PathReport& p) { return p.deadline_met; });
    return all_met ? kExitOk : kExitDeadline;
  }

  int optimize_weights() {
    if (!load()) return kExitUsage;
    const auto flows = selected();
    if (!flows) return kExitUsage;
    OptimizerSettings settings;
    settings.mode = opt_.mode == "exhaustive" ? SearchMode::exhaustive : SearchMode::paper_iterative;
    settings.w2 = opt_.w2;
    settings.w1_cap = opt_.w1_cap;
    settings.departure = departure_mode(opt_);
    std::vector<WeightPlan> plans;
    for (const FlowSpec* f : *flows) {
      log_.info("optimizing {} ({} search)", f->name, opt_.mode);
      plans.push_back(optimize(doc_.topology, *f, settings));
    }
    render_plan(out_, plans, output_format(opt_));
    const bool all = std::all_of(plans.begin(), plans.end(), [](const WeightPlan& p) { return p.feasible; });
    return all ? kExitOk : kExitDeadline;
  }

  int simulate() {
    if (!load()) return kExitUsage;
    const auto flows = selected();
    if (!flows) return kExitUsage;
    std::vector<PathReport> paths;
    std::vector<AnalysisFailure> failures;
    analyze_all(*flows, paths, failures);
    if (!failures.empty()) {
      render_analysis(out_, paths, failures, output_format(opt_));
      return kExitSaturated;
    }

    SimulationSummary summary;
    summary.duration = opt_.duration;
    summary.seeds = opt_.seeds;
    summary.seed_base = opt_.seed_base;
    for (const PathReport& p : paths) {
      FlowComparison fc;
      fc.flow = p.flow;
      fc.bound = p.end_to_end;
      for (const HopReport& h : p.hops) fc.hops.push_back({h.port, h.bound.overall, 0.0, 0});
      summary.flows.push_back(std::move(fc));
    }

    SimOptions so;
    so.duration = opt_.duration;
    so.gating = opt_.gating == "closed" ? VisitGating::closed : VisitGating::open;
    for (int i = 0; i < opt_.seeds; ++i) {
      so.seed = opt_.seed_base + static_cast<std::uint64_t>(i);
      so.record_frames = i == 0 && !opt_.trace.empty();
      log_.info("simulating seed {} for {} s", so.seed, so.duration);
      SimTrace trace;
      try {
        trace = run_simulation(doc_.topology, doc_.flows, so);
      } catch (const SaturationError& e) {
        err_ << e.code() << ": seed " << so.seed << ": " << e.what() << '\n';
        return kExitSaturated;
      }
      if (so.record_frames && !write_trace(trace)) return kExitUsage;
      accumulate(trace, summary);
    }
    for (PortThroughput& p : summary.ports) {
      p.control /= opt_.seeds;
      p.background /= opt_.seeds;
    }
    render_simulation(out_, summary, output_format(opt_));

    int code = kExitOk;
    for (const FlowComparison& f : summary.flows) {
      for (std::size_t h = 0; h < f.hops.size(); ++h) {
        if (f.hops[h].max_observed > f.hops[h].bound + kBoundTolerance) {
          err_ << fmt::format("E_BOUND_EXCEEDED: flow {} hop {} observed {} us > bound {} us\n", f.flow, h + 1,
                              format_us(f.hops[h].max_observed), format_us(f.hops[h].bound));
          code = kExitUnsound;
        }
      }
      if (f.max_observed > f.bound + kBoundTolerance) {
        err_ << fmt::format("E_BOUND_EXCEEDED: flow {} end-to-end observed {} us > bound {} us\n", f.flow,
                            format_us(f.max_observed), format_us(f.bound));
        code = kExitUnsound;
      }
    }
    return code;
  }

 private:
  bool load() {
    try {
      doc_ = load_config(opt_.config);
    } catch (const Error& e) {
      err_ << e.code() << ": " << opt_.config << ": " << e.what() << '\n';
      return false;
    }
    log_.info("loaded {}: {} links, {} flows", opt_.config, doc_.topology.links().size(), doc_.flows.size());
    const auto diags = validate_topology(doc_.topology, doc_.flows);
    render_diagnostics(err_, diags);
    if (diags.empty()) warn_shared_control_ports();
    return diags.empty();
  }

  // Each bound treats its flow as the only one in the control queue.
  void warn_shared_control_ports() {
    std::map<PortId, std::vector<std::string>> users;
    for (const FlowSpec& f : doc_.flows) {
      if (f.cls != FlowClass::control) continue;
      for (const PortId& hop : f.path) users[hop].push_back(f.name);
    }
    for (const auto& [port, names] : users) {
      if (names.size() < 2) continue;
      log_.warn("port {} carries {} control flows; per-flow bounds ignore their interference", port.str(),
                names.size());
    }
  }

  // Control flows to analyze: the --flow selection or all of them.
  std::optional<std::vector<const FlowSpec*>> selected() {
    std::vector<const FlowSpec*> out;
    if (!opt_.flow.empty()) {
      const FlowSpec* f = doc_.find_flow(opt_.flow);
      if (!f) {
        err_ << "E_UNKNOWN_FLOW: no flow named '" << opt_.flow << "'\n";
        return std::nullopt;
      }
      if (f->cls != FlowClass::control) {
        err_ << "E_FLOW_CLASS: flow '" << opt_.flow << "' is not a control flow\n";
        return std::nullopt;
      }
      out.push_back(f);
      return out;
    }
    for (const FlowSpec& f : doc_.flows) {
      if (f.cls == FlowClass::control) out.push_back(&f);
    }
    return out;
  }

  void analyze_all(const std::vector<const FlowSpec*>& flows, std::vector<PathReport>& paths,
                   std::vector<AnalysisFailure>& failures) {
    for (const FlowSpec* f : flows) {
      try {
        paths.push_back(propagate_analysis(doc_.topology, *f, departure_mode(opt_)));
        log_.debug("{}: end-to-end {} us", f->name, format_us(paths.back().end_to_end));
      } catch (const SaturationError& e) {
        log_.warn("{}: {}", f->name, e.what());
        failures.push_back({f->name, e.code(), e.what()});
      }
    }
  }

  // Warns where the conservative per-cycle balance yields a different k.
  void check_k(const std::vector<PathReport>& paths) {
    for (const PathReport& p : paths) {
      for (const HopReport& h : p.hops) {
        const FlowSpec* f = doc_.find_flow(p.flow);
        const auto burst = burst_phase(h.config, ControlFlowAtPort(f->periodic()->frame_len(), h.arrival), KCheck::strict);
        if (!burst.k_mismatch()) continue;
        if (burst.conservative_k) {
          log_.warn("{} at {}: k={} but the conservative balance needs k={}", p.flow, h.port.str(), burst.k,
                    *burst.conservative_k);
        } else {
          log_.warn("{} at {}: k={} but the conservative balance never drains the burst", p.flow, h.port.str(),
                    burst.k);
        }
      }
    }
  }

  bool write_trace(const SimTrace& trace) {
    std::ofstream file(opt_.trace, std::ios::binary);
    if (!file) {
      err_ << "E_IO: cannot write trace file " << opt_.trace << '\n';
      return false;
    }
    write_trace_csv(file, trace);
    return true;
  }

  static void accumulate(const SimTrace& trace, SimulationSummary& summary) {
    for (FlowComparison& fc : summary.flows) {
      const FlowTrace* ft = trace.find_flow(fc.flow);
      if (!ft) continue;
      for (std::size_t h = 0; h < fc.hops.size() && h < ft->hop_delays.size(); ++h) {
        fc.hops[h].samples += ft->hop_delays[h].size();
        if (!ft->hop_delays[h].empty()) fc.hops[h].max_observed = std::max(fc.hops[h].max_observed, ft->hop_max[h]);
      }
      fc.samples += ft->end_to_end.size();
      if (!ft->end_to_end.empty()) fc.max_observed = std::max(fc.max_observed, ft->max_end_to_end);
    }
    if (summary.ports.empty()) {
      for (const PortTrace& p : trace.ports) summary.ports.push_back({p.port, 0.0, 0.0});
    }
    for (PortThroughput& p : summary.ports) {
      if (const PortTrace* pt = trace.find_port(p.port)) {
        p.control += pt->control_bits / trace.duration;
        p.background += pt->background_bits / trace.duration;
      }
    }
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  spdlog::logger& log_;
  ConfigDocument doc_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Delay bounds and weight assignment for WRR switched Ethernet"};
  app.name("wrrnc");
  app.require_subcommand(1);

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Configuration file")->required();
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"table", "csv"}));
    sub->add_option("--flow", o.flow, "Restrict to one control flow");
  };
  auto departure = [&o](CLI::App* sub) {
    sub->add_option("--departure", o.departure, "Departure burst rule between hops")
        ->check(CLI::IsMember({"eq12", "paper"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "Parse and check a configuration");
  common(validate);

  CLI::App* analyze = app.add_subcommand("analyze", "Per-hop and end-to-end delay bounds");
  common(analyze);
  departure(analyze);
  analyze->add_flag("--strict", o.strict, "Warn where the conservative cycle balance changes k");

  CLI::App* optimize = app.add_subcommand("optimize", "Search WRR weights meeting the deadline");
  common(optimize);
  departure(optimize);
  optimize->add_option("--mode", o.mode, "Search strategy")->check(CLI::IsMember({"paper", "exhaustive"}));
  optimize->add_option("--w2", o.w2, "Per-hop background weights for the iterative search")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  optimize->add_option("--w1-cap", o.w1_cap, "Largest control weight tried")->check(CLI::PositiveNumber);

  CLI::App* simulate = app.add_subcommand("simulate", "Compare simulated delays against the bounds");
  common(simulate);
  departure(simulate);
  simulate->add_option("--duration", o.duration, "Simulated seconds per seed")->check(CLI::PositiveNumber);
  simulate->add_option("--seeds", o.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  simulate->add_option("--seed-base", o.seed_base, "First seed");
  simulate->add_option("--gating", o.gating, "Visit quota rule")->check(CLI::IsMember({"open", "closed"}));
  simulate->add_option("--trace", o.trace, "Write per-frame records of the first seed as CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto log = make_logger(err);
  Session session(o, out, err, *log);
  try {
    if (validate->parsed()) return session.validate();
    if (analyze->parsed()) return session.analyze();
    if (optimize->parsed()) return session.optimize_weights();
    return session.simulate();
  } catch (const SaturationError& e) {
    err << e.code() << ": " << e.what() << '\n';
    return kExitSaturated;
  } catch (const Error& e) {
    err << e.code() << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace wrrnc::cli
