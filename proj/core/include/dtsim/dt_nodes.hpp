#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "dtsim/compute_queue.hpp"
#include "dtsim/demand.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

// Sliding-window 3-sigma rule with the population standard deviation. Needs at
// least two window values; a zero-variance window flags any value off the mean.
bool anomaly_check(std::span<const double> window, double value);

// Outbound demand traffic held back while the terminal is in handover.
struct BufferedSend {
  DemandId demand = 0;
  SimTime buffered_at = 0.0;
};

struct LocalDT {
  NodeId terminal;
  ComputeQueue queue;
  std::deque<BufferedSend> buffer;

  LocalDT(NodeId t, double gflops) : terminal(t), queue(gflops, Discipline::Priority) {}
};

struct DigitalAgent {
  NodeId terminal;
  std::optional<NodeId> pool;  // empty while migrating
  std::optional<NodeId> migrating_to;
  std::uint64_t state_bytes = 0;
};

struct EdgeParams {
  double escalation_wait_s = 0.5;
  std::uint32_t anomaly_window = 32;
  double forward_fraction = 0.1;
};

/// Edge twin: agent pool, compute queue, per-terminal anomaly windows and the
/// aggregation buffer feeding DataForward messages to the cloud.
class EdgeDT {
 public:
  EdgeDT(NodeId id, double gflops, EdgeParams params);

  NodeId id() const { return id_; }
  const EdgeParams& params() const { return params_; }

  // Throws InvariantViolation on double admit / absent evict.
  void admit(NodeId terminal);
  void evict(NodeId terminal);
  bool hosts(NodeId terminal) const { return pool_.contains(terminal); }
  const std::set<NodeId>& pool() const { return pool_; }

  ComputeQueue& queue() { return queue_; }
  const ComputeQueue& queue() const { return queue_; }

  // Feeds the status-arrival gap of `terminal` into its window; true when flagged.
  bool observe_status(NodeId terminal, SimTime now);
  // Accumulates forward_fraction * bytes; returns bytes to forward once the
  // accumulation reaches `flush_at`, else 0.
  std::uint64_t accumulate_forward(std::uint64_t status_bytes, std::uint64_t flush_at);

  std::uint64_t anomalies() const { return anomalies_; }

 private:
  NodeId id_;
  EdgeParams params_;
  ComputeQueue queue_;
  std::set<NodeId> pool_;
  std::map<NodeId, std::deque<double>> windows_;
  std::map<NodeId, SimTime> last_status_;
  double forward_accum_ = 0.0;
  std::uint64_t anomalies_ = 0;
};

struct ModelUpdateParams {
  SimTime period = 10.0;
  std::uint64_t size_bytes = 100'000;
};

struct CloudDT {
  NodeId id;
  ComputeQueue queue;
  ModelUpdateParams model_update;
  // Global state digest: latest pool size reported per edge, plus traffic counts.
  std::map<NodeId, std::int64_t> pool_sizes;
  std::uint64_t forwarded_bytes = 0;
  std::uint64_t anomaly_flags = 0;

  CloudDT(NodeId n, double gflops, ModelUpdateParams mu) : id(n), queue(gflops, Discipline::Fifo), model_update(mu) {}
  bool model_updates_enabled() const { return model_update.period > 0.0; }
};

/// Where every terminal's digital agent lives.
class AgentRegistry {
 public:
  void add(NodeId terminal, NodeId pool, std::uint64_t state_bytes);
  bool has(NodeId terminal) const { return agents_.contains(terminal); }
  const DigitalAgent& agent(NodeId terminal) const { return agents_.at(terminal); }
  const std::map<NodeId, DigitalAgent>& agents() const { return agents_; }

  void begin_migration(NodeId terminal, NodeId target);
  void retarget(NodeId terminal, NodeId target);
  void end_migration(NodeId terminal, NodeId pool);

 private:
  std::map<NodeId, DigitalAgent> agents_;
};

// Exactly-one-pool sweep: each agent is in exactly one edge pool, or in none
// while migrating; pools hold no unknown terminals. Returns a diagnostic on failure.
std::optional<std::string> check_agent_pools(const AgentRegistry& registry, const std::vector<EdgeDT>& edges);

}  // namespace dtsim
