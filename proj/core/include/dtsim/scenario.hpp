#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtsim/demand.hpp"
#include "dtsim/deployment.hpp"
#include "dtsim/dt_nodes.hpp"
#include "dtsim/metrics.hpp"
#include "dtsim/mobility.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

struct ClassParams {
  double compute_gflop = 0.0;
  double raw_kb = 0.0;
  double semantic_kb = 0.0;
  double result_kb = 0.0;
  Priority priority = Priority::Normal;
};

/// Complete experiment description. Defaults are the case-study constants.
struct ScenarioConfig {
  // [simulation]
  double duration_s = 60.0;
  std::uint64_t seed = 42;
  DeploymentMode deployment = DeploymentMode::MultiLayer;
  // [topology]
  std::uint32_t terminals = 10;
  std::uint32_t edges = 2;
  double wireless_uplink_mbps = 50.0;
  double wireless_downlink_mbps = 200.0;
  double fiber_gbps = 1.0;
  double wireless_prop_ms = 1.0;
  double fiber_prop_ms = 5.0;
  // [compute]
  double terminal_gflops = 1.0;
  double edge_gflops = 20.0;
  double cloud_gflops = 500.0;
  double centralized_cost_gflop = 60.0;
  // [workload]
  double rate_per_terminal = 0.5;
  double mix_local = 0.5;
  double mix_edge = 0.3;
  double mix_cloud = 0.2;
  ClassParams local{0.1, 200.0, 20.0, 5.0, Priority::High};
  ClassParams edge{4.0, 4000.0, 800.0, 200.0, Priority::Normal};
  ClassParams cloud{30.0, 4000.0, 800.0, 200.0, Priority::Low};
  // [mobility]
  double switch_period_s = 1.0;
  std::uint32_t movers = 5;
  MoverSelection selection = MoverSelection::Resample;
  // [handover]
  double agent_state_kb = 50.0;
  // [edge]
  double escalation_wait_s = 0.5;
  std::uint32_t anomaly_window = 32;
  double forward_fraction = 0.1;
  // [model_update]
  double model_update_period_s = 10.0;
  double model_update_size_kb = 100.0;
  // [signaling]
  SignalingBudget signaling;
  // [p2p]
  bool p2p_enabled = false;
  double p2p_bandwidth_mbps = 100.0;
  std::uint32_t uncovered = 0;

  ClassParams& class_params(DemandClass c);
  const ClassParams& class_params(DemandClass c) const;

  TopologyParams topology() const;
  WorkloadConfig workload() const;
  EdgeParams edge_params() const;
  ModelUpdateParams model_update() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&);
};

// Kilobytes (decimal) to whole bytes.
std::uint64_t kb_to_bytes(double kb);

struct ValidationError {
  std::string section;
  std::string key;
  std::string message;
  std::size_t line = 0;    // 0 when not tied to a source line
  std::size_t column = 0;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ValidationError> errors;
  bool ok() const { return config.has_value(); }
};

/// Parses `[section]` / `key = value` text (`#` starts a comment). Unknown
/// keys, duplicates and malformed values are errors; every constraint is
/// checked and all problems are reported together.
ParseResult parse_scenario(std::string_view text);
ParseResult load_scenario(const std::string& path);  // throws IoError when unreadable

// Constraint checks on an already-typed config.
std::vector<ValidationError> validate(const ScenarioConfig& cfg);

// Canonical text form; parse_scenario(serialize(c)) reproduces c.
std::string serialize(const ScenarioConfig& cfg);

}  // namespace dtsim
