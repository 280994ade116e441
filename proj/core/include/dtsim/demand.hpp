#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtsim/kernel.hpp"
#include "dtsim/network.hpp"
#include "dtsim/rng.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

// Demand class and serving layer share one ordered scale: Local < Edge < Cloud.
enum class Layer : std::uint8_t { Local = 0, Edge = 1, Cloud = 2 };
using DemandClass = Layer;

enum class Priority : std::uint8_t { High = 0, Normal = 1, Low = 2 };

const char* to_string(Layer layer);
const char* to_string(Priority p);
std::optional<Layer> parse_layer(std::string_view s);
std::optional<Priority> parse_priority(std::string_view s);

struct DemandSpec {
  double compute_gflop = 0.0;
  std::uint64_t raw_bytes = 0;
  std::uint64_t semantic_bytes = 0;
  std::uint64_t result_bytes = 0;
  Priority priority = Priority::Normal;
};

struct WorkloadConfig {
  double rate_per_terminal = 0.5;
  // Local, Edge, Cloud fractions.
  std::array<double, 3> mix{0.5, 0.3, 0.2};
  std::array<DemandSpec, 3> specs{};

  const DemandSpec& spec(DemandClass c) const { return specs[static_cast<std::size_t>(c)]; }
  // Human-readable problems; empty when valid.
  std::vector<std::string> problems() const;
};

enum class DemandStatus : std::uint8_t { Pending, Completed, Failed };

// Latency components. `mark` closes the interval since the previous mark, so
// the components always telescope to (last mark - creation time).
struct LatencyBreakdown {
  enum class Part : std::uint8_t { QueueWait, Transmission, Compute, Buffering };

  double queue_wait = 0.0;
  double transmission = 0.0;
  double compute = 0.0;
  double buffering = 0.0;
  SimTime last_mark = 0.0;

  void mark(Part part, SimTime now);
  double total() const { return queue_wait + transmission + compute + buffering; }
};

struct Demand {
  DemandId id = 0;
  NodeId origin;
  DemandClass cls = DemandClass::Local;
  DemandSpec spec;
  SimTime t_created = 0.0;
  std::optional<SimTime> t_completed;
  std::optional<Layer> serving_layer;
  LatencyBreakdown breakdown;
  DemandStatus status = DemandStatus::Pending;
  std::string failure;
  std::uint64_t signaling_bytes = 0;
  bool handover_affected = false;
};

struct Arrival {
  SimTime delta = 0.0;
  DemandClass cls = DemandClass::Local;
};

// Class for a uniform u in [0,1): Local below mix[0], Edge below mix[0]+mix[1], else Cloud.
DemandClass sample_class(double u, const std::array<double, 3>& mix);

// One Poisson arrival: exponential gap, then the class draw, from the same stream.
Arrival next_arrival(RandomStream& stream, const WorkloadConfig& cfg);

Demand make_demand(DemandId id, NodeId origin, DemandClass cls, const WorkloadConfig& cfg, SimTime now);

/// Per-terminal arrival streams. Each terminal draws from its own child of the
/// workload substream so arrivals do not depend on event interleaving.
class WorkloadGenerator {
 public:
  WorkloadGenerator(std::uint64_t seed, std::uint32_t terminals, WorkloadConfig cfg);

  Arrival next(std::uint32_t terminal) { return next_arrival(streams_.at(terminal), cfg_); }
  const WorkloadConfig& config() const { return cfg_; }

 private:
  WorkloadConfig cfg_;
  std::vector<RandomStream> streams_;
};

}  // namespace dtsim
