#include "dtsim/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dtsim/deployment.hpp"
#include "dtsim/errors.hpp"

namespace dtsim {

namespace {

constexpr std::uint64_t kChainArrivals = 0x100;
constexpr std::uint64_t kInjected = 0x200;  // demand already created; its id sits above bit 16

std::vector<NodeId> covered_terminals(const Topology& topo) {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < topo.terminal_count(); ++i) {
    if (topo.covered(topo.terminal(i))) out.push_back(topo.terminal(i));
  }
  return out;
}

}  // namespace

struct Simulation::DemandState {
  std::optional<NodeId> via_edge;  // edge that escalated the demand
  std::optional<Layer> served_at;
};

Simulation::Simulation(ScenarioConfig cfg, SimulationOptions opts)
    : cfg_(std::move(cfg)),
      opts_(opts),
      multilayer_(cfg_.deployment == DeploymentMode::MultiLayer),
      topo_(cfg_.topology()),
      assoc_(topo_),
      net_(topo_, kernel_),
      workload_(cfg_.workload()),
      generator_(cfg_.seed, cfg_.terminals, workload_),
      cloud_(topo_.cloud(), cfg_.cloud_gflops, cfg_.model_update()),
      movers_(cfg_.seed, MobilityPlan{cfg_.switch_period_s, cfg_.movers, cfg_.selection}, covered_terminals(topo_)),
      mobility_rng_(cfg_.seed, Substream::Mobility),
      open_handover_(cfg_.terminals) {
  if (auto errors = validate(cfg_); !errors.empty()) throw ConfigError(errors.front().to_string());
  for (std::uint32_t i = 0; i < topo_.terminal_count(); ++i) locals_.emplace_back(topo_.terminal(i), cfg_.terminal_gflops);
  for (std::uint32_t j = 0; j < topo_.edge_count(); ++j) edges_.emplace_back(topo_.edge(j), cfg_.edge_gflops, cfg_.edge_params());
  if (multilayer_) {
    const auto state = kb_to_bytes(cfg_.agent_state_kb);
    for (NodeId t : covered_terminals(topo_)) {
      const NodeId e = *assoc_.edge_of(t);
      registry_.add(t, e, state);
      edges_[topo_.index_of(e)].admit(t);
    }
  }
  if (cfg_.movers > 0 && topo_.edge_count() >= 2) ticks_ = tick_times(cfg_.switch_period_s, cfg_.duration_s);
}

Simulation::~Simulation() = default;

DemandId Simulation::inject_demand(std::uint32_t terminal, DemandClass cls, SimTime time) {
  if (ran_) throw InvariantViolation("inject_demand after run");
  if (terminal >= topo_.terminal_count()) throw ConfigError("inject_demand: no such terminal");
  if (!(time >= 0.0)) throw ConfigError("inject_demand: time must be >= 0");
  const DemandId id = demands_.size();
  demands_.push_back(make_demand(id, topo_.terminal(terminal), cls, workload_, time));
  state_.emplace_back();
  ledger_.register_demand(id);
  injected_.push_back(id);
  return id;
}

RunResult Simulation::run() {
  if (ran_) throw InvariantViolation("simulation already ran");
  ran_ = true;
  RunResult out;
  std::string diagnostic;
  try {
    for (DemandId id : injected_) {
      const Demand& d = demands_[id];
      kernel_.schedule(d.t_created, EventKind::DemandGenerated, d.origin.value, kInjected | (id << 16));
    }
    if (opts_.generate_workload) {
      for (std::uint32_t i = 0; i < topo_.terminal_count(); ++i) {
        const Arrival a = generator_.next(i);
        if (a.delta <= cfg_.duration_s) {
          kernel_.schedule(a.delta, EventKind::DemandGenerated, i, static_cast<std::uint64_t>(a.cls) | kChainArrivals);
        }
      }
    }
    for (SimTime t : ticks_) kernel_.schedule(t, EventKind::MobilityTick);
    if (multilayer_ && cloud_.model_updates_enabled()) {
      for (SimTime t : tick_times(cloud_.model_update.period, cfg_.duration_s)) kernel_.schedule(t, EventKind::ModelUpdateTick);
    }
    kernel_.run_until(cfg_.duration_s, [this](const Event& e) { dispatch(e); });
  } catch (const std::exception& e) {
    out.failed = true;
    diagnostic = e.what();
  }

  for (auto& d : demands_) {
    d.signaling_bytes = ledger_.demand_signaling(d.id);
    if (d.status == DemandStatus::Completed) out.records.push_back(make_record(d));
  }
  out.summary = build_summary(out.records);
  if (out.failed) {
    out.summary.status = "failed";
    out.summary.diagnostic = diagnostic;
  }
  return out;
}

void Simulation::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::DemandGenerated: on_demand_generated(e); break;
    case EventKind::MessageHopDone: on_hop_done(e.subject); break;
    case EventKind::ComputeDone: on_compute_done(NodeId{static_cast<std::uint32_t>(e.subject)}, e.aux); break;
    case EventKind::MobilityTick: on_mobility_tick(); break;
    case EventKind::ModelUpdateTick: on_model_update_tick(); break;
    case EventKind::HandoverComplete: on_handover_complete(NodeId{static_cast<std::uint32_t>(e.subject)}); break;
  }
  if (opts_.check_invariants) check_invariants();
}

void Simulation::on_demand_generated(const Event& e) {
  if (e.aux & kInjected) {
    start_demand(demands_.at(e.aux >> 16));
    return;
  }
  const auto terminal = static_cast<std::uint32_t>(e.subject);
  const auto cls = static_cast<DemandClass>(e.aux & 0xff);
  const DemandId id = demands_.size();
  demands_.push_back(make_demand(id, topo_.terminal(terminal), cls, workload_, kernel_.now()));
  state_.emplace_back();
  ledger_.register_demand(id);
  if (e.aux & kChainArrivals) {
    const Arrival a = generator_.next(terminal);
    if (kernel_.now() + a.delta <= cfg_.duration_s) {
      kernel_.schedule_in(a.delta, EventKind::DemandGenerated, terminal, static_cast<std::uint64_t>(a.cls) | kChainArrivals);
    }
  }
  start_demand(demands_.back());
}

std::optional<NodeId> Simulation::uplink_target(NodeId terminal) const {
  if (auto e = assoc_.edge_of(terminal)) return e;
  if (!cfg_.p2p_enabled) return std::nullopt;
  if (auto relay = p2p_relay_for(topo_, assoc_, terminal)) return assoc_.edge_of(*relay);
  return std::nullopt;
}

void Simulation::start_demand(Demand& d) {
  if (!multilayer_) {
    start_centralized(d);
    return;
  }
  const NodeId t = d.origin;
  const auto target = uplink_target(t);
  if (d.cls == DemandClass::Local) {
    submit_compute(t, d.id, d.spec.compute_gflop, d.spec.priority);
    if (target) {
      send(MessageKind::StatusSummary, t, *target, cfg_.signaling.status_summary + cfg_.signaling.header, d.id,
           LedgerBucket::PerDemand);
    }
    return;
  }
  if (!target) {
    fail(d, "no-route");
    return;
  }
  if (assoc_.in_handover(t)) {
    locals_[topo_.index_of(t)].buffer.push_back({d.id, kernel_.now()});
    ++handovers_[*open_handover_[t.value]].buffered;
    d.handover_affected = true;
    return;
  }
  send_uplink_bundle(d);
}

void Simulation::send_uplink_bundle(Demand& d) {
  const NodeId t = d.origin;
  const auto target = uplink_target(t);
  if (!target) {
    fail(d, "no-route");
    return;
  }
  const auto& sig = cfg_.signaling;
  try {
    send(MessageKind::DemandData, t, *target, d.spec.semantic_bytes, d.id, LedgerBucket::DataVolume, true);
  } catch (const RoutingError&) {
    fail(d, "no-route");
    return;
  }
  send(MessageKind::StatusSummary, t, *target, sig.status_summary + sig.header, d.id, LedgerBucket::PerDemand);
  send(MessageKind::DemandPacket, t, *target, sig.demand_packet + sig.header, d.id, LedgerBucket::PerDemand);
}

void Simulation::start_centralized(Demand& d) {
  const NodeId t = d.origin;
  const NodeId c = topo_.cloud();
  const auto& sig = cfg_.signaling;
  try {
    send(MessageKind::DemandData, t, c, d.spec.raw_bytes, d.id, LedgerBucket::DataVolume, true);
  } catch (const RoutingError&) {
    fail(d, "no-route");
    return;
  }
  send(MessageKind::StatusSummary, t, c, sig.centralized_status + sig.header, d.id, LedgerBucket::PerDemand);
  send(MessageKind::DemandPacket, t, c, sig.centralized_request + sig.header, d.id, LedgerBucket::PerDemand);
}

MessageId Simulation::send(MessageKind kind, NodeId src, NodeId dst, std::uint64_t size, std::optional<DemandId> demand,
                           LedgerBucket bucket, bool on_path, std::optional<MessageId> restart_of) {
  Message m;
  m.kind = kind;
  m.src = src;
  m.dst = dst;
  m.size = size;
  m.demand = demand;
  m.on_path = on_path;
  m.restart_of = restart_of;
  const MessageId id = net_.send(std::move(m), assoc_);
  ledger_.book(net_.message(id), bucket);
  if (demand && topo_.kind(src) == NodeKind::Terminal) {
    departures_.push_back({src, kernel_.now(), id, kind, *demand, demands_.at(*demand).cls});
  }
  return id;
}

void Simulation::on_hop_done(MessageId id) {
  const HopArrival h = net_.arrive(id);
  const Message m = net_.message(id);
  if (m.on_path && m.demand) {
    Demand& d = demands_.at(*m.demand);
    if (d.status == DemandStatus::Pending) {
      d.breakdown.mark(LatencyBreakdown::Part::QueueWait, h.start);
      d.breakdown.mark(LatencyBreakdown::Part::Transmission, h.arrival);
      if (m.rerouted) d.handover_affected = true;
    }
  }
  if (h.at_destination) {
    deliver(id);
    return;
  }
  if (m.kind == MessageKind::AgentMigration && h.at == topo_.cloud()) {
    // A retargeted handover catches its migration here.
    const NodeId terminal = migrations_.at(id);
    if (auto target = assoc_.handover_target(terminal)) net_.redirect(id, *target);
  }
  try {
    net_.forward(id, assoc_);
  } catch (const RoutingError&) {
    net_.abandon(id);
    if (m.on_path && m.demand && demands_.at(*m.demand).status == DemandStatus::Pending) {
      fail(demands_.at(*m.demand), "no-route");
    }
  }
}

void Simulation::deliver(MessageId id) {
  const Message m = net_.message(id);
  const NodeKind at = topo_.kind(m.dst);
  const auto& sig = cfg_.signaling;
  Demand* d = m.demand ? &demands_.at(*m.demand) : nullptr;
  const bool pending = d && d->status == DemandStatus::Pending;

  switch (m.kind) {
    case MessageKind::DemandData:
      if (!pending) return;
      if (at == NodeKind::EdgeServer) edge_receives_demand(m.dst, d->id);
      else if (at == NodeKind::Cloud) cloud_receives_demand(d->id);
      return;
    case MessageKind::ResultData:
      if (pending && at == NodeKind::Terminal) complete(*d, *state_.at(d->id).served_at);
      return;
    case MessageKind::StatusSummary:
      if (multilayer_ && at == NodeKind::EdgeServer) {
        EdgeDT& edge = edges_[topo_.index_of(m.dst)];
        if (edge.observe_status(m.src, kernel_.now())) {
          send(MessageKind::AnomalyFlag, m.dst, topo_.cloud(), sig.anomaly_flag + sig.header, std::nullopt,
               LedgerBucket::Maintenance);
        }
        if (auto bytes = edge.accumulate_forward(m.size, sig.status_summary + sig.header)) {
          send(MessageKind::DataForward, m.dst, topo_.cloud(), bytes, std::nullopt, LedgerBucket::Maintenance);
        }
      }
      return;
    case MessageKind::Feedback:
      // The cloud's return control reaches the escalating edge, which reports to the terminal.
      if (multilayer_ && at == NodeKind::EdgeServer && m.src == topo_.cloud() && d) {
        try {
          send(MessageKind::Feedback, m.dst, d->origin, sig.result_report + sig.header, d->id, LedgerBucket::PerDemand);
        } catch (const RoutingError&) {
        }
      }
      return;
    case MessageKind::ModelUpdate:
      if (at == NodeKind::EdgeServer) {
        for (NodeId t : edges_[topo_.index_of(m.dst)].pool()) {
          send(MessageKind::ModelUpdate, m.dst, t, m.size, std::nullopt, LedgerBucket::ModelUpdate);
        }
      }
      return;
    case MessageKind::HandoverNotice: {
      const NodeId terminal = m.src;
      const NodeId target = *assoc_.handover_target(terminal);
      edges_[topo_.index_of(m.dst)].evict(terminal);
      registry_.begin_migration(terminal, target);
      send(MessageKind::PoolUpdate, m.dst, topo_.cloud(), sig.pool_notice + sig.header, std::nullopt,
           LedgerBucket::Maintenance);
      const MessageId mig = send(MessageKind::AgentMigration, m.dst, target, registry_.agent(terminal).state_bytes,
                                 std::nullopt, LedgerBucket::DataVolume);
      migrations_[mig] = terminal;
      return;
    }
    case MessageKind::AgentMigration:
      migration_arrived(m.dst, migrations_.at(id));
      return;
    case MessageKind::PoolUpdate:
      cloud_.pool_sizes[m.src] = static_cast<std::int64_t>(edges_[topo_.index_of(m.src)].pool().size());
      return;
    case MessageKind::DataForward:
      cloud_.forwarded_bytes += m.size;
      return;
    case MessageKind::AnomalyFlag:
      ++cloud_.anomaly_flags;
      return;
    case MessageKind::DemandPacket:
      return;
  }
}

void Simulation::edge_receives_demand(NodeId edge, DemandId id) {
  Demand& d = demands_.at(id);
  if (registry_.has(d.origin)) {
    const DigitalAgent& agent = registry_.agent(d.origin);
    if (agent.pool != edge && !agent.migrating_to) {
      fail(d, "orphaned");
      return;
    }
  }
  EdgeDT& e = edges_[topo_.index_of(edge)];
  PolicyState ps;
  ps.edge_wait_s = e.queue().estimated_wait(kernel_.now());
  ps.escalation_wait_s = opts_.disable_escalation ? std::numeric_limits<double>::infinity() : e.params().escalation_wait_s;
  const ServingDecision decision = decide(d.cls, DeploymentMode::MultiLayer, ps);
  if (decision.layer == Layer::Cloud) {
    if (decision.escalated) ++escalations_;
    state_.at(id).via_edge = edge;
    const auto& sig = cfg_.signaling;
    send(MessageKind::DemandData, edge, topo_.cloud(), d.spec.semantic_bytes, id, LedgerBucket::DataVolume, true);
    send(MessageKind::DemandPacket, edge, topo_.cloud(), sig.cloud_control + sig.header, id, LedgerBucket::PerDemand);
    return;
  }
  submit_compute(edge, id, d.spec.compute_gflop, d.spec.priority);
}

void Simulation::cloud_receives_demand(DemandId id) {
  const Demand& d = demands_.at(id);
  const double cost = multilayer_ ? d.spec.compute_gflop : cfg_.centralized_cost_gflop;
  submit_compute(topo_.cloud(), id, cost, d.spec.priority);
}

ComputeQueue& Simulation::queue_of(NodeId node) {
  switch (topo_.kind(node)) {
    case NodeKind::Terminal: return locals_[topo_.index_of(node)].queue;
    case NodeKind::EdgeServer: return edges_[topo_.index_of(node)].queue();
    case NodeKind::Cloud: break;
  }
  return cloud_.queue;
}

void Simulation::submit_compute(NodeId node, DemandId id, double cost, Priority prio) {
  ComputeJob job{id, cost, prio, kernel_.now(), 0};
  if (auto started = queue_of(node).submit(job, kernel_.now())) {
    kernel_.schedule(started->finish, EventKind::ComputeDone, node.value, id);
  }
}

void Simulation::on_compute_done(NodeId node, DemandId id) {
  auto [done, next] = queue_of(node).finish(kernel_.now());
  if (done.job.demand != id) throw InvariantViolation("compute: completion for a job not in service");
  if (next) kernel_.schedule(next->finish, EventKind::ComputeDone, node.value, next->job.demand);
  compute_log_.push_back({node, id, done.start, done.finish});

  Demand& d = demands_.at(id);
  if (d.status != DemandStatus::Pending) return;
  d.breakdown.mark(LatencyBreakdown::Part::QueueWait, done.start);
  d.breakdown.mark(LatencyBreakdown::Part::Compute, done.finish);
  const auto& sig = cfg_.signaling;

  switch (topo_.kind(node)) {
    case NodeKind::Terminal:
      complete(d, Layer::Local);
      if (auto target = uplink_target(d.origin)) {
        send(MessageKind::Feedback, d.origin, *target, sig.result_report + sig.header, id, LedgerBucket::PerDemand);
      }
      return;
    case NodeKind::EdgeServer:
      state_.at(id).served_at = Layer::Edge;
      try {
        send(MessageKind::ResultData, node, d.origin, d.spec.result_bytes, id, LedgerBucket::DataVolume, true);
      } catch (const RoutingError&) {
        fail(d, "no-route");
        return;
      }
      send(MessageKind::Feedback, node, d.origin, sig.result_report + sig.header, id, LedgerBucket::PerDemand);
      return;
    case NodeKind::Cloud:
      state_.at(id).served_at = Layer::Cloud;
      try {
        send(MessageKind::ResultData, node, d.origin, d.spec.result_bytes, id, LedgerBucket::DataVolume, true);
      } catch (const RoutingError&) {
        fail(d, "no-route");
        return;
      }
      if (multilayer_) {
        send(MessageKind::Feedback, node, *state_.at(id).via_edge, sig.cloud_control + sig.header, id,
             LedgerBucket::PerDemand);
      } else {
        send(MessageKind::Feedback, node, d.origin, sig.centralized_feedback + sig.header, id, LedgerBucket::PerDemand);
      }
      return;
  }
}

void Simulation::complete(Demand& d, Layer layer) {
  if (layer < d.cls) throw InvariantViolation("demand served below its class layer");
  d.status = DemandStatus::Completed;
  d.t_completed = kernel_.now();
  d.serving_layer = layer;
}

void Simulation::fail(Demand& d, std::string reason) {
  d.status = DemandStatus::Failed;
  d.failure = std::move(reason);
}

void Simulation::on_mobility_tick() {
  for (NodeId t : movers_.next()) {
    const NodeId current = *assoc_.edge_of(t);
    const NodeId target = pick_target(topo_, current, mobility_rng_);
    if (multilayer_) handover_multilayer(t, target);
    else handover_centralized(t, target);
  }
}

void Simulation::handover_multilayer(NodeId terminal, NodeId target) {
  if (assoc_.in_handover(terminal)) {
    // Coalesce: the newer target supersedes; a migration still in flight is
    // redirected when it reaches the cloud.
    if (*assoc_.handover_target(terminal) == target) return;
    assoc_.retarget(terminal, target);
    if (registry_.agent(terminal).migrating_to) registry_.retarget(terminal, target);
    handovers_[*open_handover_[terminal.value]].to = target;
    return;
  }
  const NodeId from = *assoc_.edge_of(terminal);
  assoc_.begin_handover(terminal, target);
  open_handover_[terminal.value] = handovers_.size();
  handovers_.push_back({terminal, from, target, kernel_.now(), std::nullopt, 0, {}});
  const auto& sig = cfg_.signaling;
  send(MessageKind::HandoverNotice, terminal, from, sig.handover_notice + sig.header, std::nullopt,
       LedgerBucket::Maintenance);
}

void Simulation::migration_arrived(NodeId edge, NodeId terminal) {
  const NodeId target = *assoc_.handover_target(terminal);
  if (edge != target) {
    const MessageId mig = send(MessageKind::AgentMigration, edge, target, registry_.agent(terminal).state_bytes,
                               std::nullopt, LedgerBucket::DataVolume);
    migrations_[mig] = terminal;
    return;
  }
  kernel_.schedule(kernel_.now(), EventKind::HandoverComplete, terminal.value);
}

void Simulation::on_handover_complete(NodeId terminal) {
  const NodeId target = *assoc_.handover_target(terminal);
  edges_[topo_.index_of(target)].admit(terminal);
  registry_.end_migration(terminal, target);
  const auto& sig = cfg_.signaling;
  send(MessageKind::PoolUpdate, target, topo_.cloud(), sig.pool_notice + sig.header, std::nullopt,
       LedgerBucket::Maintenance);
  assoc_.associate(terminal, target);
  assoc_.end_handover(terminal);
  handovers_[*open_handover_[terminal.value]].t_complete = kernel_.now();
  open_handover_[terminal.value].reset();

  auto& buffer = locals_[topo_.index_of(terminal)].buffer;
  while (!buffer.empty()) {
    Demand& d = demands_.at(buffer.front().demand);
    buffer.pop_front();
    if (d.status != DemandStatus::Pending) continue;
    d.breakdown.mark(LatencyBreakdown::Part::Buffering, kernel_.now());
    send_uplink_bundle(d);
  }
}

void Simulation::handover_centralized(NodeId terminal, NodeId target) {
  const NodeId from = *assoc_.edge_of(terminal);
  const SimTime now = kernel_.now();
  HandoverRecord rec{terminal, from, target, now, now, 0, {}};
  assoc_.associate(terminal, target);
  for (const AbortedTransfer& a : net_.abort_inflight(terminal)) {
    const Message m = net_.message(a.id);
    rec.aborted.push_back(a.id);
    aborted_.push_back(a);
    Demand* d = m.demand ? &demands_.at(*m.demand) : nullptr;
    if (d && d->status != DemandStatus::Pending) continue;
    if (d) {
      d->handover_affected = true;
      if (m.on_path) {
        if (a.started) {
          d->breakdown.mark(LatencyBreakdown::Part::QueueWait, a.hop_start);
          d->breakdown.mark(LatencyBreakdown::Part::Transmission, now);
        } else {
          d->breakdown.mark(LatencyBreakdown::Part::QueueWait, now);
        }
      }
    }
    const LedgerBucket bucket = m.plane() == Plane::Data ? LedgerBucket::DataVolume : LedgerBucket::Retransmission;
    try {
      const MessageId restart = send(m.kind, a.sender, m.dst, m.size, m.demand, bucket, m.on_path, a.id);
      restarts_.push_back({a.id, restart});
    } catch (const RoutingError&) {
      if (d && m.on_path) fail(*d, "no-route");
    }
  }
  handovers_.push_back(std::move(rec));
}

void Simulation::on_model_update_tick() {
  ++model_update_waves_;
  for (const EdgeDT& e : edges_) {
    send(MessageKind::ModelUpdate, topo_.cloud(), e.id(), cloud_.model_update.size_bytes, std::nullopt,
         LedgerBucket::ModelUpdate);
  }
}

void Simulation::check_invariants() {
  ++sweeps_;
  if (multilayer_) {
    if (auto problem = check_agent_pools(registry_, edges_)) throw InvariantViolation(*problem);
    for (const auto& [t, agent] : registry_.agents()) {
      if (agent.pool && !assoc_.in_handover(t) && assoc_.edge_of(t) != agent.pool) {
        throw InvariantViolation("agent pool of " + topo_.label(t) + " disagrees with its association");
      }
    }
  }
  for (const LocalDT& l : locals_) {
    if (!l.buffer.empty() && !assoc_.in_handover(l.terminal)) {
      throw InvariantViolation("buffered traffic at " + topo_.label(l.terminal) + " outside a handover");
    }
  }
}

RunSummary Simulation::build_summary(const std::vector<DemandRecord>& records) const {
  RunSummary s;
  s.mode = to_string(cfg_.deployment);
  s.seed = cfg_.seed;
  s.duration_s = cfg_.duration_s;
  s.generated = demands_.size();
  for (const auto& d : demands_) {
    if (d.status == DemandStatus::Completed) ++s.completed;
    else if (d.status == DemandStatus::Failed) ++s.failed;
    else ++s.pending;
  }
  summarize_records(records, s);
  s.signaling_demand_bytes = ledger_.bucket(LedgerBucket::PerDemand);
  s.signaling_maintenance_bytes = ledger_.bucket(LedgerBucket::Maintenance);
  s.model_update_bytes = ledger_.bucket(LedgerBucket::ModelUpdate);
  s.retransmission_bytes = ledger_.bucket(LedgerBucket::Retransmission);
  s.data_bytes = ledger_.bucket(LedgerBucket::DataVolume);
  s.handovers = handovers_.size();
  s.aborted_transfers = aborted_.size();
  s.restarted_transfers = restarts_.size();
  s.wasted_bytes = net_.counters().bytes_wasted;
  s.escalations = escalations_;
  for (const EdgeDT& e : edges_) s.anomaly_flags += e.anomalies();
  s.messages_sent = net_.counters().sent;
  s.messages_delivered = net_.counters().delivered;
  s.messages_aborted = net_.counters().aborted;
  s.messages_in_flight = net_.in_flight();
  s.events_dispatched = kernel_.dispatched();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(kernel_.trace_digest()));
  s.trace_digest = buf;
  return s;
}

}  // namespace dtsim
