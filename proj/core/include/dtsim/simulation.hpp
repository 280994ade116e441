#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtsim/dt_nodes.hpp"
#include "dtsim/kernel.hpp"
#include "dtsim/metrics.hpp"
#include "dtsim/mobility.hpp"
#include "dtsim/network.hpp"
#include "dtsim/scenario.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

struct SimulationOptions {
  // Poisson workload from the scenario. Off for hand-injected demands only.
  bool generate_workload = true;
  // Sweep the agent-pool and breakdown invariants after every event.
  bool check_invariants = false;
  // Disable the edge->cloud escalation rule (Cloud-class demands still go up).
  bool disable_escalation = false;
};

// A demand-carrying message leaving a terminal's transmit queue.
struct Departure {
  NodeId terminal;
  SimTime time = 0.0;
  MessageId message = 0;
  MessageKind kind = MessageKind::DemandData;
  DemandId demand = 0;
  DemandClass cls = DemandClass::Local;
};

// Start / finish of one compute job, for schedule checks.
struct ComputeRecord {
  NodeId node;
  DemandId demand = 0;
  SimTime start = 0.0;
  SimTime finish = 0.0;
};

struct RunResult {
  std::vector<DemandRecord> records;  // completed demands, by id
  RunSummary summary;
  bool failed = false;
};

/// One simulation run of one deployment mode.
///
/// Owns the kernel, topology, network, twins and ledger; nothing is shared
/// between instances, so several may run on different threads.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg, SimulationOptions opts = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Adds a demand generated at `time` (before run()). Injected demands take the
  // lowest ids, in injection order; workload demands are numbered after them.
  DemandId inject_demand(std::uint32_t terminal, DemandClass cls, SimTime time);

  // Runs to the configured duration. A fatal error ends the run early with
  // summary.status == "failed" and whatever was completed so far.
  RunResult run();

  const ScenarioConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  const Kernel& kernel() const { return kernel_; }
  const Network& network() const { return net_; }
  const AssociationMap& associations() const { return assoc_; }
  const MetricsLedger& ledger() const { return ledger_; }
  const AgentRegistry& agents() const { return registry_; }
  const std::vector<EdgeDT>& edges() const { return edges_; }
  const CloudDT& cloud() const { return cloud_; }
  const std::vector<Demand>& demands() const { return demands_; }
  const std::vector<HandoverRecord>& handovers() const { return handovers_; }
  const std::vector<Departure>& departures() const { return departures_; }
  const std::vector<ComputeRecord>& compute_log() const { return compute_log_; }
  // (aborted id, restart id) pairs from centralized handovers.
  const std::vector<std::pair<MessageId, MessageId>>& restarts() const { return restarts_; }
  const std::vector<AbortedTransfer>& aborted_transfers() const { return aborted_; }
  std::uint64_t model_update_waves() const { return model_update_waves_; }
  std::uint64_t escalations() const { return escalations_; }
  std::uint64_t invariant_sweeps() const { return sweeps_; }

 private:
  struct DemandState;

  void dispatch(const Event& e);
  void on_demand_generated(const Event& e);
  void on_hop_done(MessageId id);
  void on_compute_done(NodeId node, DemandId demand);
  void on_mobility_tick();
  void on_model_update_tick();
  void on_handover_complete(NodeId terminal);

  void start_demand(Demand& d);
  void start_centralized(Demand& d);
  void send_uplink_bundle(Demand& d);
  void deliver(MessageId id);
  void edge_receives_demand(NodeId edge, DemandId d);
  void cloud_receives_demand(DemandId d);
  void submit_compute(NodeId node, DemandId d, double cost, Priority prio);
  void complete(Demand& d, Layer layer);
  void fail(Demand& d, std::string reason);

  void handover_multilayer(NodeId terminal, NodeId target);
  void handover_centralized(NodeId terminal, NodeId target);
  void migration_arrived(NodeId edge, NodeId terminal);

  MessageId send(MessageKind kind, NodeId src, NodeId dst, std::uint64_t size, std::optional<DemandId> demand,
                 LedgerBucket bucket, bool on_path = false, std::optional<MessageId> restart_of = std::nullopt);
  std::optional<NodeId> uplink_target(NodeId terminal) const;
  ComputeQueue& queue_of(NodeId node);
  void check_invariants();
  RunSummary build_summary(const std::vector<DemandRecord>& records) const;

  ScenarioConfig cfg_;
  SimulationOptions opts_;
  bool multilayer_;
  Kernel kernel_;
  Topology topo_;
  AssociationMap assoc_;
  Network net_;
  MetricsLedger ledger_;
  WorkloadConfig workload_;
  WorkloadGenerator generator_;
  std::vector<LocalDT> locals_;
  std::vector<EdgeDT> edges_;
  CloudDT cloud_;
  AgentRegistry registry_;
  MoverSelector movers_;
  RandomStream mobility_rng_;
  std::vector<SimTime> ticks_;

  std::vector<Demand> demands_;
  std::vector<DemandState> state_;
  std::vector<HandoverRecord> handovers_;
  std::vector<std::optional<std::size_t>> open_handover_;  // per terminal, index into handovers_
  std::vector<Departure> departures_;
  std::vector<ComputeRecord> compute_log_;
  std::vector<std::pair<MessageId, MessageId>> restarts_;
  std::vector<AbortedTransfer> aborted_;
  std::vector<DemandId> injected_;
  std::map<MessageId, NodeId> migrations_;  // AgentMigration message -> terminal
  std::uint64_t model_update_waves_ = 0;
  std::uint64_t escalations_ = 0;
  std::uint64_t sweeps_ = 0;
  bool ran_ = false;
};

}  // namespace dtsim
