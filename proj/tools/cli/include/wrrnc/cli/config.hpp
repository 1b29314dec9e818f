#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wrrnc/errors.hpp"
#include "wrrnc/optimizer.hpp"
#include "wrrnc/simulator.hpp"
#include "wrrnc/topology.hpp"

namespace wrrnc::cli {

// Syntax error at a 1-based line and column.
class ConfigError : public Error {
 public:
  ConfigError(std::string code, int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct SimulationSettings {
  seconds duration = 10.0;
  int seeds = 20;
  std::uint64_t seed_base = 1;
  VisitGating gating = VisitGating::open;
};

struct ConfigDocument {
  Topology topology;
  std::vector<FlowSpec> flows;
  // Not part of the file grammar; populated with defaults and command flags.
  OptimizerSettings optimizer;
  SimulationSettings simulation;

  const FlowSpec* find_flow(std::string_view name) const;
};

// Line-oriented format, `#` comments, whitespace-separated key=value pairs:
//
//   link <name>         a=<endpoint> b=<endpoint> capacity_bps=<int>
//   port <switch>.<int> w1=<int> w2=<int> max_bg_frame_bytes=<int>
//   flow <name>         class=control src=<station> dst=<station> frame_bytes=<int>
//                       period_s=<float> deadline_s=<float> path=<sw.port,...>
//   flow <name>         class=background src=<station> dst=<station> path=<...>
//
// Frame sizes are bytes in the file and bits in memory.
ConfigDocument parse_config(std::string_view text);
ConfigDocument load_config(const std::filesystem::path& path);

// Canonical text that parses back to the same topology and flows.
std::string to_config_text(const ConfigDocument& doc);

}  // namespace wrrnc::cli
