#include "dtsim/dt_nodes.hpp"

#include <cmath>
#include <string>

#include "dtsim/errors.hpp"

namespace dtsim {

bool anomaly_check(std::span<const double> window, double value) {
  if (window.size() < 2) return false;
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(window.size());
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(window.size()));
  if (sd == 0.0) return value != mean;
  return std::abs(value - mean) > 3.0 * sd;
}

EdgeDT::EdgeDT(NodeId id, double gflops, EdgeParams params)
    : id_(id), params_(params), queue_(gflops, Discipline::Priority) {}

void EdgeDT::admit(NodeId terminal) {
  if (!pool_.insert(terminal).second) {
    throw InvariantViolation("edge pool: terminal " + std::to_string(terminal.value) + " admitted twice");
  }
}

void EdgeDT::evict(NodeId terminal) {
  if (pool_.erase(terminal) == 0) {
    throw InvariantViolation("edge pool: evict of absent terminal " + std::to_string(terminal.value));
  }
}

bool EdgeDT::observe_status(NodeId terminal, SimTime now) {
  auto last = last_status_.find(terminal);
  if (last == last_status_.end()) {
    last_status_[terminal] = now;
    return false;
  }
  const double gap = now - last->second;
  last->second = now;
  auto& w = windows_[terminal];
  const std::vector<double> snapshot(w.begin(), w.end());
  const bool flagged = anomaly_check(snapshot, gap);
  w.push_back(gap);
  while (w.size() > params_.anomaly_window) w.pop_front();
  if (flagged) ++anomalies_;
  return flagged;
}

std::uint64_t EdgeDT::accumulate_forward(std::uint64_t status_bytes, std::uint64_t flush_at) {
  forward_accum_ += params_.forward_fraction * static_cast<double>(status_bytes);
  if (flush_at == 0 || forward_accum_ < static_cast<double>(flush_at)) return 0;
  const auto out = static_cast<std::uint64_t>(std::floor(forward_accum_));
  forward_accum_ -= static_cast<double>(out);
  return out;
}

void AgentRegistry::add(NodeId terminal, NodeId pool, std::uint64_t state_bytes) {
  DigitalAgent a{terminal, pool, std::nullopt, state_bytes};
  if (!agents_.emplace(terminal, a).second) throw InvariantViolation("agent registry: duplicate agent");
}

void AgentRegistry::begin_migration(NodeId terminal, NodeId target) {
  auto& a = agents_.at(terminal);
  if (!a.pool) throw InvariantViolation("agent registry: migration of an agent already migrating");
  a.pool.reset();
  a.migrating_to = target;
}

void AgentRegistry::retarget(NodeId terminal, NodeId target) {
  auto& a = agents_.at(terminal);
  if (!a.migrating_to) throw InvariantViolation("agent registry: retarget of a resident agent");
  a.migrating_to = target;
}

void AgentRegistry::end_migration(NodeId terminal, NodeId pool) {
  auto& a = agents_.at(terminal);
  if (a.pool) throw InvariantViolation("agent registry: agent admitted while resident");
  a.pool = pool;
  a.migrating_to.reset();
}

std::optional<std::string> check_agent_pools(const AgentRegistry& registry, const std::vector<EdgeDT>& edges) {
  for (const auto& [terminal, agent] : registry.agents()) {
    int pools = 0;
    std::optional<NodeId> where;
    for (const auto& e : edges) {
      if (e.hosts(terminal)) {
        ++pools;
        where = e.id();
      }
    }
    const std::string who = "agent of terminal " + std::to_string(terminal.value);
    if (pools > 1) return who + " is in " + std::to_string(pools) + " pools";
    if (pools == 0 && !agent.migrating_to) return who + " is in no pool and not migrating";
    if (pools == 1 && (agent.migrating_to || agent.pool != where)) return who + " pool membership disagrees with registry";
  }
  for (const auto& e : edges) {
    for (NodeId t : e.pool()) {
      if (!registry.has(t)) return "edge pool holds unknown terminal " + std::to_string(t.value);
    }
  }
  return std::nullopt;
}

}  // namespace dtsim
