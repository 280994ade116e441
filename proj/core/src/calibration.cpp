#include "dtsim/calibration.hpp"

#include <cmath>
#include <sstream>

namespace dtsim {

namespace {

// Deliberately re-derived from the raw scenario numbers (no Topology / Network).
struct Rates {
  double up_bps, down_bps, fiber_bps, wprop, fprop;
};

Rates rates_of(const ScenarioConfig& c) {
  return {c.wireless_uplink_mbps * 1e6, c.wireless_downlink_mbps * 1e6, c.fiber_gbps * 1e9, c.wireless_prop_ms / 1e3,
          c.fiber_prop_ms / 1e3};
}

double tx(double kb, double bps) { return static_cast<double>(kb_to_bytes(kb)) * 8.0 / bps; }

void add(PathEstimate& p, std::string label, double s) {
  p.terms.push_back({std::move(label), s});
  p.total += s;
}

}  // namespace

PathEstimate idle_path_latency(const ScenarioConfig& c, DeploymentMode mode, DemandClass cls) {
  const Rates r = rates_of(c);
  const ClassParams& p = c.class_params(cls);
  PathEstimate e;
  if (mode == DeploymentMode::Centralized) {
    add(e, "uplink raw", tx(p.raw_kb, r.up_bps));
    add(e, "wireless propagation", r.wprop);
    add(e, "fiber up raw", tx(p.raw_kb, r.fiber_bps));
    add(e, "fiber propagation", r.fprop);
    add(e, "cloud compute", c.centralized_cost_gflop / c.cloud_gflops);
    add(e, "fiber down result", tx(p.result_kb, r.fiber_bps));
    add(e, "fiber propagation", r.fprop);
    add(e, "downlink result", tx(p.result_kb, r.down_bps));
    add(e, "wireless propagation", r.wprop);
    return e;
  }
  switch (cls) {
    case DemandClass::Local:
      add(e, "terminal compute", p.compute_gflop / c.terminal_gflops);
      break;
    case DemandClass::Edge:
      add(e, "uplink semantic", tx(p.semantic_kb, r.up_bps));
      add(e, "wireless propagation", r.wprop);
      add(e, "edge compute", p.compute_gflop / c.edge_gflops);
      add(e, "downlink result", tx(p.result_kb, r.down_bps));
      add(e, "wireless propagation", r.wprop);
      break;
    case DemandClass::Cloud:
      add(e, "uplink semantic", tx(p.semantic_kb, r.up_bps));
      add(e, "wireless propagation", r.wprop);
      add(e, "fiber up semantic", tx(p.semantic_kb, r.fiber_bps));
      add(e, "fiber propagation", r.fprop);
      add(e, "cloud compute", p.compute_gflop / c.cloud_gflops);
      add(e, "fiber down result", tx(p.result_kb, r.fiber_bps));
      add(e, "fiber propagation", r.fprop);
      add(e, "downlink result", tx(p.result_kb, r.down_bps));
      add(e, "wireless propagation", r.wprop);
      break;
  }
  return e;
}

double mix_weighted_latency(const ScenarioConfig& c) {
  return c.mix_local * idle_path_latency(c, DeploymentMode::MultiLayer, DemandClass::Local).total +
         c.mix_edge * idle_path_latency(c, DeploymentMode::MultiLayer, DemandClass::Edge).total +
         c.mix_cloud * idle_path_latency(c, DeploymentMode::MultiLayer, DemandClass::Cloud).total;
}

CalibrationResult calibrate(const ScenarioConfig& base, const CalibrationTargets& targets) {
  CalibrationResult out;
  out.config = base;
  ScenarioConfig& c = out.config;
  const Rates r = rates_of(base);
  // Rounded to the picosecond so decimal inputs give clean targets.
  auto pico = [](double s) { return std::round(s * 1e12) / 1e12; };
  const double target_m = pico(targets.multilayer.mid() - targets.multilayer_headroom_s);
  const double target_c = pico(targets.centralized.mid() - targets.centralized_headroom_s);
  auto infeasible = [&out](std::string what, double nearest) {
    out.feasible = false;
    out.problems.push_back(std::move(what));
    if (!out.nearest_achievable) out.nearest_achievable = nearest;
  };
  auto round_kb = [](double kb) { return std::round(kb * 1000.0) / 1000.0; };

  if (!(targets.multilayer.lo <= targets.multilayer.hi) || !(targets.centralized.lo <= targets.centralized.hi)) {
    infeasible("empty target band", 0.0);
    return out;
  }

  // Local: latency is compute alone.
  if (target_m > 0.0) {
    c.local.compute_gflop = target_m * c.terminal_gflops;
  } else {
    infeasible("multilayer target must be positive for local demands", 0.0);
  }

  // Edge / Cloud: total = fixed propagation + k * (variable part at k = 1).
  for (auto cls : {DemandClass::Edge, DemandClass::Cloud}) {
    auto& p = c.class_params(cls);
    const double fixed = cls == DemandClass::Edge ? 2 * r.wprop : 2 * r.wprop + 2 * r.fprop;
    const double variable = idle_path_latency(c, DeploymentMode::MultiLayer, cls).total - fixed;
    if (target_m < fixed || variable <= 0.0) {
      infeasible(std::string(to_string(cls)) + " class: multilayer target below propagation floor", fixed);
      continue;
    }
    const double k = (target_m - fixed) / variable;
    p.semantic_kb = round_kb(p.semantic_kb * k);
    p.result_kb = round_kb(p.result_kb * k);
    p.compute_gflop = p.compute_gflop * k;
  }

  // Centralized: solve raw size with everything else fixed.
  for (auto cls : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    auto& p = c.class_params(cls);
    ScenarioConfig probe = c;
    probe.class_params(cls).raw_kb = 0.0;
    const double fixed = idle_path_latency(probe, DeploymentMode::Centralized, cls).total;
    const double per_byte = 8.0 / r.up_bps + 8.0 / r.fiber_bps;
    const double raw_bytes = (target_c - fixed) / per_byte;
    const double floor_kb = p.semantic_kb;
    if (raw_bytes / 1000.0 < floor_kb) {
      probe.class_params(cls).raw_kb = floor_kb;
      infeasible(std::string(to_string(cls)) + " class: centralized target needs raw < semantic",
                 idle_path_latency(probe, DeploymentMode::Centralized, cls).total);
      continue;
    }
    p.raw_kb = round_kb(raw_bytes / 1000.0);
  }

  for (auto cls : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    const auto i = static_cast<std::size_t>(cls);
    out.multilayer_predicted[i] = idle_path_latency(c, DeploymentMode::MultiLayer, cls).total;
    out.centralized_predicted[i] = idle_path_latency(c, DeploymentMode::Centralized, cls).total;
  }

  std::ostringstream os;
  os << "# Calibrated workload. Idle-path oracle predictions (seconds):\n";
  os << "#   multilayer target " << format_double(target_m) << " (band " << format_double(targets.multilayer.lo) << "-"
     << format_double(targets.multilayer.hi) << ", headroom " << format_double(targets.multilayer_headroom_s) << ")\n";
  os << "#   centralized target " << format_double(target_c) << " (band " << format_double(targets.centralized.lo) << "-"
     << format_double(targets.centralized.hi) << ", headroom " << format_double(targets.centralized_headroom_s) << ")\n";
  for (auto cls : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    const auto i = static_cast<std::size_t>(cls);
    os << "#   " << to_string(cls) << ": multilayer " << format_double(out.multilayer_predicted[i]) << ", centralized "
       << format_double(out.centralized_predicted[i]) << "\n";
  }
  os << "[workload]\n";
  for (auto cls : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    const auto& p = c.class_params(cls);
    const std::string n = to_string(cls);
    os << n << "_compute_gflop = " << format_double(p.compute_gflop) << "\n";
    os << n << "_raw_kb = " << format_double(p.raw_kb) << "\n";
    os << n << "_semantic_kb = " << format_double(p.semantic_kb) << "\n";
    os << n << "_result_kb = " << format_double(p.result_kb) << "\n";
  }
  out.fragment = os.str();
  return out;
}

}  // namespace dtsim
