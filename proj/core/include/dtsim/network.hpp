#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "dtsim/kernel.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

using MessageId = std::uint64_t;
using DemandId = std::uint64_t;

enum class MessageKind : std::uint8_t {
  DemandData,
  ResultData,
  StatusSummary,
  DemandPacket,
  Feedback,
  ModelUpdate,
  HandoverNotice,
  AgentMigration,
  DataForward,
  AnomalyFlag,
  PoolUpdate,
};

enum class Plane : std::uint8_t { Data, Control };

const char* to_string(MessageKind kind);
Plane plane_of(MessageKind kind);

// Ledger bucket for a message's bytes; every message lands in exactly one.
enum class LedgerBucket : std::uint8_t { PerDemand, Maintenance, ModelUpdate, Retransmission, DataVolume };

enum class MessageState : std::uint8_t { InFlight, Delivered, Aborted };

struct Message {
  MessageId id = 0;
  MessageKind kind = MessageKind::DemandData;
  NodeId src;
  NodeId dst;
  std::uint64_t size = 0;
  std::optional<DemandId> demand;
  SimTime created_at = 0.0;
  std::optional<MessageId> restart_of;
  // Carries the demand's critical path (its breakdown follows this message).
  bool on_path = false;

  Plane plane() const { return plane_of(kind); }

  // Transport state.
  MessageState state = MessageState::InFlight;
  NodeId at;
  LinkIndex link = 0;
  SimTime hop_enqueued = 0.0;
  SimTime hop_start = 0.0;
  SimTime hop_finish = 0.0;
  SimTime hop_arrival = 0.0;
  EventId arrival_event = 0;
  std::vector<LinkIndex> planned;  // remaining planned links from `at`
  bool rerouted = false;
  std::uint32_t hops_done = 0;
};

struct HopArrival {
  NodeId at;
  bool at_destination = false;
  SimTime enqueued = 0.0;
  SimTime start = 0.0;
  SimTime arrival = 0.0;
};

struct AbortedTransfer {
  MessageId id = 0;
  NodeId sender;        // node the aborted hop left from
  bool started = false; // serialization had begun
  SimTime hop_enqueued = 0.0;
  SimTime hop_start = 0.0;
  double wasted_bytes = 0.0;
};

struct NetworkCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t aborted = 0;
  std::uint64_t bytes_sent = 0;       // logical message sizes
  std::uint64_t bytes_delivered = 0;
  std::uint64_t bytes_aborted = 0;
  double bytes_wasted = 0.0;          // serialized before an abort
};

/// Store-and-forward transport with one FIFO transmit queue per directed link.
///
/// A message occupies the link from max(enqueue, link free) for size*8/bandwidth
/// seconds and reaches the next node one propagation delay later. The next hop is
/// resolved from the current association when the message reaches a node.
class Network {
 public:
  Network(const Topology& topo, Kernel& kernel);

  // Assigns the id and enqueues the first hop. Throws RoutingError before any
  // state changes when no route exists.
  MessageId send(Message msg, const AssociationMap& assoc);

  // Completes the hop whose arrival event fired.
  HopArrival arrive(MessageId id);
  // Enqueues the next hop for a message sitting at an intermediate node.
  void forward(MessageId id, const AssociationMap& assoc);
  void redirect(MessageId id, NodeId new_dst);
  // Drops a message stuck at an intermediate node (unroutable).
  void abandon(MessageId id);

  // Aborts every message queued on or serializing over the terminal's wireless links.
  std::vector<AbortedTransfer> abort_inflight(NodeId terminal);

  const Message& message(MessageId id) const { return messages_.at(id); }
  const std::vector<Message>& messages() const { return messages_; }
  const NetworkCounters& counters() const { return counters_; }
  std::uint64_t in_flight() const { return counters_.sent - counters_.delivered - counters_.aborted; }
  SimTime link_free_at(LinkIndex l) const { return links_.at(l).free_at; }
  std::size_t link_queue_length(LinkIndex l) const { return links_.at(l).occupants.size(); }

 private:
  struct LinkState {
    SimTime free_at = 0.0;
    std::deque<MessageId> occupants;  // messages not yet fully serialized, FIFO
  };

  void enqueue(Message& m, LinkIndex link);

  const Topology& topo_;
  Kernel& kernel_;
  std::vector<Message> messages_;
  std::vector<LinkState> links_;
  NetworkCounters counters_;
};

}  // namespace dtsim
