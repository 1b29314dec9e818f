#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wrrnc/optimizer.hpp"
#include "wrrnc/simulator.hpp"
#include "wrrnc/topology.hpp"

namespace wrrnc::cli {

enum class OutputFormat { table, csv };

// Delays in microseconds with one decimal, bandwidth in Mb/s with three.
std::string format_us(seconds s);
std::string format_mbps(bits_per_second r);
std::string format_bits(bits b);

struct HopComparison {
  PortId port;
  seconds bound = 0.0;
  seconds max_observed = 0.0;
  std::size_t samples = 0;
};

struct FlowComparison {
  std::string flow;
  std::vector<HopComparison> hops;
  seconds bound = 0.0;
  seconds max_observed = 0.0;
  std::size_t samples = 0;
};

struct PortThroughput {
  PortId port;
  bits_per_second control = 0.0;
  bits_per_second background = 0.0;
};

struct SimulationSummary {
  seconds duration = 0.0;
  int seeds = 0;
  std::uint64_t seed_base = 0;
  std::vector<FlowComparison> flows;
  std::vector<PortThroughput> ports;  // averaged over seeds
};

// A failed analysis line (saturation at a hop) reported in place of a path.
struct AnalysisFailure {
  std::string flow;
  std::string code;
  std::string message;
};

void render_analysis(std::ostream& out, const std::vector<PathReport>& paths,
                     const std::vector<AnalysisFailure>& failures, OutputFormat format);
void render_plan(std::ostream& out, const std::vector<WeightPlan>& plans, OutputFormat format);
void render_simulation(std::ostream& out, const SimulationSummary& summary, OutputFormat format);
void render_diagnostics(std::ostream& out, const std::vector<Diagnostic>& diagnostics);

}  // namespace wrrnc::cli
