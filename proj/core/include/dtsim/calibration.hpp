#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dtsim/scenario.hpp"

namespace dtsim {

struct OracleTerm {
  std::string label;
  double seconds = 0.0;
};

struct PathEstimate {
  double total = 0.0;
  std::vector<OracleTerm> terms;
};

/// Closed-form latency of one demand on an idle network: per hop size*8/rate
/// plus propagation, plus cost/capacity at the serving node. Computed from the
/// scenario numbers alone, independent of the simulator.
PathEstimate idle_path_latency(const ScenarioConfig& cfg, DeploymentMode mode, DemandClass cls);

// Multi-layer estimate weighted by the class mix.
double mix_weighted_latency(const ScenarioConfig& cfg);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

struct CalibrationTargets {
  Band centralized{0.870, 0.930};
  Band multilayer{0.330, 0.360};
  // Expected queueing / mobility contribution subtracted from the band midpoint.
  double centralized_headroom_s = 0.0;
  double multilayer_headroom_s = 0.0;
};

struct CalibrationResult {
  bool feasible = true;
  ScenarioConfig config;
  std::array<double, 3> multilayer_predicted{};
  std::array<double, 3> centralized_predicted{};
  std::vector<std::string> problems;
  std::optional<double> nearest_achievable;
  std::string fragment;  // [workload] section with the solved values
};

/// Solves workload parameters so every class's idle-path oracle lands on its
/// target (band midpoint minus headroom).
///
/// Multi-layer: Local-class compute is solved directly; Edge- and Cloud-class
/// semantic size, result size and compute cost are scaled by one common factor
/// (the oracle is affine in it). Centralized: each class's raw size is solved
/// against the now-fixed result size and the centralized compute cost. Raw must
/// stay >= semantic. Never mutates `base`.
CalibrationResult calibrate(const ScenarioConfig& base, const CalibrationTargets& targets);

}  // namespace dtsim
