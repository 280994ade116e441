#include "dtsim/topology.hpp"

#include <algorithm>
#include <cstdlib>

#include "dtsim/errors.hpp"

namespace dtsim {

SimTime transmission_time(std::uint64_t bytes, double bandwidth_bps) {
  if (!(bandwidth_bps > 0.0)) throw ConfigError("transmission_time: bandwidth must be positive");
  return static_cast<double>(bytes) * 8.0 / bandwidth_bps;
}

Topology::Topology(const TopologyParams& params) : params_(params) {
  if (params_.terminals == 0) throw ConfigError("topology: at least one terminal required");
  if (params_.uncovered > params_.terminals) throw ConfigError("topology: uncovered exceeds terminal count");
  if (params_.edges == 0 && params_.uncovered != params_.terminals) {
    throw ConfigError("topology: terminals need an edge unless uncovered");
  }
  const std::size_t n = node_count();
  link_table_.assign(n * n, -1);
  auto add = [this, n](NodeId from, NodeId to, double bps, SimTime prop, LinkKind kind) {
    link_table_[from.value * n + to.value] = static_cast<std::int64_t>(links_.size());
    links_.push_back(LinkSpec{from, to, bps, prop, kind});
  };
  for (std::uint32_t j = 0; j < params_.edges; ++j) {
    for (std::uint32_t i = 0; i < params_.terminals; ++i) {
      add(terminal(i), edge(j), params_.uplink_bps, params_.wireless_propagation, LinkKind::Uplink);
      add(edge(j), terminal(i), params_.downlink_bps, params_.wireless_propagation, LinkKind::Downlink);
    }
  }
  for (std::uint32_t j = 0; j < params_.edges; ++j) {
    add(edge(j), cloud(), params_.fiber_bps, params_.fiber_propagation, LinkKind::FiberUp);
    add(cloud(), edge(j), params_.fiber_bps, params_.fiber_propagation, LinkKind::FiberDown);
  }
  if (params_.p2p_enabled) {
    for (std::uint32_t a = 0; a < params_.terminals; ++a) {
      for (std::uint32_t b = 0; b < params_.terminals; ++b) {
        if (a != b) add(terminal(a), terminal(b), params_.p2p_bps, params_.wireless_propagation, LinkKind::DeviceToDevice);
      }
    }
  }
  for (const auto& l : links_) {
    if (!(l.bandwidth_bps > 0.0) || !(l.propagation >= 0.0)) {
      throw ConfigError("topology: link bandwidth must be > 0 and propagation >= 0");
    }
  }
}

NodeId Topology::terminal(std::uint32_t i) const {
  if (i >= params_.terminals) throw InvariantViolation("topology: terminal index out of range");
  return NodeId{i};
}

NodeId Topology::edge(std::uint32_t j) const {
  if (j >= params_.edges) throw InvariantViolation("topology: edge index out of range");
  return NodeId{params_.terminals + j};
}

NodeKind Topology::kind(NodeId n) const {
  if (n.value < params_.terminals) return NodeKind::Terminal;
  if (n.value < params_.terminals + params_.edges) return NodeKind::EdgeServer;
  if (n.value == cloud().value) return NodeKind::Cloud;
  throw InvariantViolation("topology: unknown node id");
}

std::uint32_t Topology::index_of(NodeId n) const {
  switch (kind(n)) {
    case NodeKind::Terminal: return n.value;
    case NodeKind::EdgeServer: return n.value - params_.terminals;
    case NodeKind::Cloud: return 0;
  }
  return 0;
}

bool Topology::covered(NodeId terminal) const {
  return kind(terminal) == NodeKind::Terminal && terminal.value < params_.terminals - params_.uncovered;
}

std::string Topology::label(NodeId n) const {
  switch (kind(n)) {
    case NodeKind::Terminal: return "t" + std::to_string(index_of(n));
    case NodeKind::EdgeServer: return "e" + std::to_string(index_of(n));
    case NodeKind::Cloud: return "cloud";
  }
  return "?";
}

std::optional<LinkIndex> Topology::find_link(NodeId from, NodeId to) const {
  const std::size_t n = node_count();
  if (from.value >= n || to.value >= n) return std::nullopt;
  const auto v = link_table_[from.value * n + to.value];
  if (v < 0) return std::nullopt;
  return static_cast<LinkIndex>(v);
}

LinkIndex Topology::link_between(NodeId from, NodeId to) const {
  if (auto l = find_link(from, to)) return *l;
  throw RoutingError("no link " + label(from) + "->" + label(to));
}

AssociationMap::AssociationMap(const Topology& topo)
    : assoc_(topo.terminal_count()), handover_target_(topo.terminal_count()) {
  // Initial association: round-robin over edges for covered terminals.
  for (std::uint32_t i = 0; i < topo.terminal_count(); ++i) {
    const NodeId t = topo.terminal(i);
    if (topo.covered(t)) assoc_[i] = topo.edge(i % topo.edge_count());
  }
}

void AssociationMap::associate(NodeId terminal, NodeId edge) { assoc_.at(terminal.value) = edge; }

void AssociationMap::begin_handover(NodeId terminal, NodeId target) {
  if (in_handover(terminal)) throw InvariantViolation("association: terminal already in handover");
  handover_target_.at(terminal.value) = target;
}

void AssociationMap::retarget(NodeId terminal, NodeId target) {
  if (!in_handover(terminal)) throw InvariantViolation("association: retarget outside handover");
  handover_target_.at(terminal.value) = target;
}

void AssociationMap::end_handover(NodeId terminal) { handover_target_.at(terminal.value).reset(); }

std::optional<NodeId> p2p_relay_for(const Topology& topo, const AssociationMap& assoc, NodeId terminal) {
  if (!topo.params().p2p_enabled) return std::nullopt;
  std::optional<NodeId> best;
  std::int64_t best_dist = 0;
  for (std::uint32_t i = 0; i < topo.terminal_count(); ++i) {
    const NodeId cand = topo.terminal(i);
    if (cand == terminal || !assoc.edge_of(cand)) continue;
    const std::int64_t d = std::llabs(static_cast<std::int64_t>(cand.value) - static_cast<std::int64_t>(terminal.value));
    if (!best || d < best_dist) {
      best = cand;
      best_dist = d;
    }
  }
  return best;
}

namespace {

// Chain of nodes from n up to the cloud; empty when n has no upward path.
std::vector<NodeId> upward_chain(const Topology& topo, const AssociationMap& assoc, NodeId n) {
  std::vector<NodeId> chain{n};
  NodeId cur = n;
  if (topo.kind(cur) == NodeKind::Terminal) {
    if (auto e = assoc.edge_of(cur)) {
      cur = *e;
    } else if (auto relay = p2p_relay_for(topo, assoc, cur)) {
      chain.push_back(*relay);
      cur = *assoc.edge_of(*relay);
    } else {
      return {};
    }
    chain.push_back(cur);
  }
  if (topo.kind(cur) == NodeKind::EdgeServer) {
    cur = topo.cloud();
    chain.push_back(cur);
  }
  return chain;
}

}  // namespace

std::vector<LinkIndex> route(const Topology& topo, const AssociationMap& assoc, NodeId src, NodeId dst) {
  if (src == dst) throw RoutingError("route: src == dst");
  const bool t2t = topo.kind(src) == NodeKind::Terminal && topo.kind(dst) == NodeKind::Terminal;
  if (t2t && topo.params().p2p_enabled) return {topo.link_between(src, dst)};

  const auto up = upward_chain(topo, assoc, src);
  const auto down = upward_chain(topo, assoc, dst);
  if (up.empty()) throw RoutingError("route: " + topo.label(src) + " has no association");
  if (down.empty()) throw RoutingError("route: " + topo.label(dst) + " has no association");

  // Lowest common node: first node of `up` that also appears in `down`.
  std::size_t ui = 0;
  std::size_t di = 0;
  bool found = false;
  for (ui = 0; ui < up.size() && !found; ++ui) {
    for (di = 0; di < down.size(); ++di) {
      if (up[ui] == down[di]) {
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) throw RoutingError("route: no common parent");
  if (t2t && topo.kind(up[ui]) == NodeKind::Cloud) {
    throw RoutingError("route: terminals " + topo.label(src) + "," + topo.label(dst) + " share no edge and P2P is disabled");
  }

  std::vector<LinkIndex> path;
  for (std::size_t k = 0; k < ui; ++k) path.push_back(topo.link_between(up[k], up[k + 1]));
  for (std::size_t k = di; k > 0; --k) path.push_back(topo.link_between(down[k], down[k - 1]));
  return path;
}

}  // namespace dtsim
