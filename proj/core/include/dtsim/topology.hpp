#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtsim/kernel.hpp"

namespace dtsim {

enum class NodeKind : std::uint8_t { Terminal, EdgeServer, Cloud };

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

using LinkIndex = std::uint32_t;

enum class LinkKind : std::uint8_t { Uplink, Downlink, FiberUp, FiberDown, DeviceToDevice };

struct LinkSpec {
  NodeId from;
  NodeId to;
  double bandwidth_bps = 0.0;
  SimTime propagation = 0.0;
  LinkKind kind = LinkKind::Uplink;
};

// Serialization delay: bytes * 8 / bandwidth. Decimal units throughout.
SimTime transmission_time(std::uint64_t bytes, double bandwidth_bps);

struct TopologyParams {
  std::uint32_t terminals = 10;
  std::uint32_t edges = 2;
  double uplink_bps = 50e6;
  double downlink_bps = 200e6;
  double fiber_bps = 1e9;
  SimTime wireless_propagation = 0.001;
  SimTime fiber_propagation = 0.005;
  bool p2p_enabled = false;
  double p2p_bps = 100e6;
  // The highest-numbered `uncovered` terminals have no edge coverage.
  std::uint32_t uncovered = 0;
};

/// Terminal / edge / cloud hierarchy.
///
/// Node ids: terminals 0..T-1, edges T..T+E-1, cloud T+E. Each terminal owns a
/// dedicated uplink and downlink to every edge (only the associated pair is
/// used); each edge has one fiber link per direction to the cloud. With P2P
/// enabled every ordered terminal pair gets a device-to-device link.
class Topology {
 public:
  explicit Topology(const TopologyParams& params);

  const TopologyParams& params() const { return params_; }
  std::uint32_t terminal_count() const { return params_.terminals; }
  std::uint32_t edge_count() const { return params_.edges; }
  std::size_t node_count() const { return params_.terminals + params_.edges + 1; }

  NodeId terminal(std::uint32_t i) const;
  NodeId edge(std::uint32_t j) const;
  NodeId cloud() const { return NodeId{params_.terminals + params_.edges}; }

  NodeKind kind(NodeId n) const;
  // Position within its kind (terminal i, edge j).
  std::uint32_t index_of(NodeId n) const;
  bool covered(NodeId terminal) const;
  std::string label(NodeId n) const;

  const std::vector<LinkSpec>& links() const { return links_; }
  const LinkSpec& link(LinkIndex i) const { return links_.at(i); }
  std::optional<LinkIndex> find_link(NodeId from, NodeId to) const;
  LinkIndex link_between(NodeId from, NodeId to) const;  // throws RoutingError

 private:
  TopologyParams params_;
  std::vector<LinkSpec> links_;
  std::vector<std::int64_t> link_table_;  // node_count^2, -1 when absent
};

/// Terminal -> edge association, plus the in-handover marker.
class AssociationMap {
 public:
  explicit AssociationMap(const Topology& topo);

  std::optional<NodeId> edge_of(NodeId terminal) const { return assoc_.at(terminal.value); }
  void associate(NodeId terminal, NodeId edge);

  bool in_handover(NodeId terminal) const { return handover_target_.at(terminal.value).has_value(); }
  std::optional<NodeId> handover_target(NodeId terminal) const { return handover_target_.at(terminal.value); }
  void begin_handover(NodeId terminal, NodeId target);
  void retarget(NodeId terminal, NodeId target);
  void end_handover(NodeId terminal);

 private:
  std::vector<std::optional<NodeId>> assoc_;
  std::vector<std::optional<NodeId>> handover_target_;
};

// Nearest covered terminal by id distance (ties to the lower id), for P2P relay.
std::optional<NodeId> p2p_relay_for(const Topology& topo, const AssociationMap& assoc, NodeId terminal);

/// Hierarchical route from src to dst under the current association.
///
/// Traffic climbs from each endpoint towards the cloud (terminal -> its edge,
/// or its P2P relay when uncovered; edge -> cloud) and turns at the lowest
/// common node. Terminal-to-terminal traffic uses the direct D2D link when P2P
/// is enabled and otherwise needs a shared edge.
std::vector<LinkIndex> route(const Topology& topo, const AssociationMap& assoc, NodeId src, NodeId dst);

}  // namespace dtsim
