#include "dtsim/demand.hpp"

#include <cmath>
#include <sstream>

#include "dtsim/errors.hpp"

namespace dtsim {

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::Local: return "local";
    case Layer::Edge: return "edge";
    case Layer::Cloud: return "cloud";
  }
  return "?";
}

const char* to_string(Priority p) {
  switch (p) {
    case Priority::High: return "high";
    case Priority::Normal: return "normal";
    case Priority::Low: return "low";
  }
  return "?";
}

std::optional<Layer> parse_layer(std::string_view s) {
  if (s == "local") return Layer::Local;
  if (s == "edge") return Layer::Edge;
  if (s == "cloud") return Layer::Cloud;
  return std::nullopt;
}

std::optional<Priority> parse_priority(std::string_view s) {
  if (s == "high") return Priority::High;
  if (s == "normal") return Priority::Normal;
  if (s == "low") return Priority::Low;
  return std::nullopt;
}

std::vector<std::string> WorkloadConfig::problems() const {
  std::vector<std::string> out;
  if (!(rate_per_terminal > 0.0) || !std::isfinite(rate_per_terminal)) out.emplace_back("rate_per_terminal must be > 0");
  double sum = 0.0;
  for (double f : mix) {
    if (!(f >= 0.0 && f <= 1.0)) out.emplace_back("class fractions must lie in [0,1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "class fractions sum to " << sum << ", expected 1";
    out.push_back(os.str());
  }
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& s = specs[c];
    const std::string name = to_string(static_cast<Layer>(c));
    if (!(s.compute_gflop >= 0.0) || !std::isfinite(s.compute_gflop)) out.push_back(name + " compute cost must be >= 0");
    if (s.semantic_bytes > s.raw_bytes) out.push_back(name + " semantic size exceeds raw size");
  }
  return out;
}

void LatencyBreakdown::mark(Part part, SimTime now) {
  const double dt = now - last_mark;
  if (dt < 0.0) throw InvariantViolation("breakdown: mark moves backwards in time");
  switch (part) {
    case Part::QueueWait: queue_wait += dt; break;
    case Part::Transmission: transmission += dt; break;
    case Part::Compute: compute += dt; break;
    case Part::Buffering: buffering += dt; break;
  }
  last_mark = now;
}

DemandClass sample_class(double u, const std::array<double, 3>& mix) {
  if (u < mix[0]) return DemandClass::Local;
  if (u < mix[0] + mix[1]) return DemandClass::Edge;
  // Guard against a zero cloud share absorbing rounding slack.
  if (mix[2] == 0.0) return mix[1] > 0.0 ? DemandClass::Edge : DemandClass::Local;
  return DemandClass::Cloud;
}

Arrival next_arrival(RandomStream& stream, const WorkloadConfig& cfg) {
  Arrival a;
  a.delta = draw_exponential(stream, cfg.rate_per_terminal);
  a.cls = sample_class(stream.uniform(), cfg.mix);
  return a;
}

Demand make_demand(DemandId id, NodeId origin, DemandClass cls, const WorkloadConfig& cfg, SimTime now) {
  Demand d;
  d.id = id;
  d.origin = origin;
  d.cls = cls;
  d.spec = cfg.spec(cls);
  d.t_created = now;
  d.breakdown.last_mark = now;
  return d;
}

WorkloadGenerator::WorkloadGenerator(std::uint64_t seed, std::uint32_t terminals, WorkloadConfig cfg)
    : cfg_(std::move(cfg)) {
  if (auto p = cfg_.problems(); !p.empty()) throw ConfigError("workload: " + p.front());
  streams_.reserve(terminals);
  for (std::uint32_t i = 0; i < terminals; ++i) streams_.emplace_back(seed, Substream::Workload, i);
}

}  // namespace dtsim
