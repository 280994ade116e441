#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "dtsim/errors.hpp"
#include "dtsim/network.hpp"

using namespace dtsim;

namespace {

// Drives a Network over a kernel: hop arrivals are forwarded until they reach
// their destination, and callbacks can be planted at arbitrary times.
struct Harness {
  explicit Harness(TopologyParams p = {}) : topo(p), assoc(topo), net(topo, kernel) {}

  void at(SimTime t, std::function<void()> fn) {
    const EventId id = kernel.schedule(t, EventKind::MobilityTick, actions.size());
    (void)id;
    actions.push_back(std::move(fn));
  }

  void run(SimTime until = 100.0) {
    kernel.run_until(until, [&](const Event& e) {
      if (e.kind == EventKind::MobilityTick) {
        actions[e.subject]();
        return;
      }
      HopArrival h = net.arrive(e.subject);
      if (h.at_destination) delivered[e.subject] = kernel.now();
      else net.forward(e.subject, assoc);
    });
  }

  MessageId send(MessageKind kind, NodeId src, NodeId dst, std::uint64_t size) {
    Message m;
    m.kind = kind;
    m.src = src;
    m.dst = dst;
    m.size = size;
    return net.send(m, assoc);
  }

  Kernel kernel;
  Topology topo;
  AssociationMap assoc;
  Network net;
  std::vector<std::function<void()>> actions;
  std::map<MessageId, SimTime> delivered;
};

// Independent store-and-forward sum over the hops of an idle path.
double idle_path(const Topology& topo, const std::vector<LinkIndex>& path, std::uint64_t bytes) {
  double t = 0.0;
  for (LinkIndex l : path) t += 8.0 * static_cast<double>(bytes) / topo.link(l).bandwidth_bps + topo.link(l).propagation;
  return t;
}

}  // namespace

TEST(MessageKind, PlaneClassification) {
  EXPECT_EQ(plane_of(MessageKind::DemandData), Plane::Data);
  EXPECT_EQ(plane_of(MessageKind::ResultData), Plane::Data);
  EXPECT_EQ(plane_of(MessageKind::AgentMigration), Plane::Data);
  for (MessageKind k : {MessageKind::StatusSummary, MessageKind::DemandPacket, MessageKind::Feedback,
                        MessageKind::ModelUpdate, MessageKind::HandoverNotice, MessageKind::DataForward,
                        MessageKind::AnomalyFlag, MessageKind::PoolUpdate}) {
    EXPECT_EQ(plane_of(k), Plane::Control) << to_string(k);
  }
}

TEST(Network, SingleHopDownlink) {
  Harness h;
  MessageId id = 0;
  h.at(2.0, [&] { id = h.send(MessageKind::ResultData, h.topo.edge(0), h.topo.terminal(0), 1'000'000); });
  h.run();
  ASSERT_TRUE(h.delivered.contains(id));
  EXPECT_NEAR(h.delivered[id], 2.0 + 0.04 + 0.001, 1e-12);
}

TEST(Network, BackToBackFifo) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const NodeId e = h.topo.edge(0);
  const MessageId a = h.send(MessageKind::DemandData, t, e, 500'000);  // 0.08 s on 50 Mbps
  const MessageId b = h.send(MessageKind::StatusSummary, t, e, 250'000);
  EXPECT_EQ(h.net.message(b).hop_start, h.net.message(a).hop_finish);
  h.run();
  EXPECT_NEAR(h.delivered[a], 0.08 + 0.001, 1e-12);
  EXPECT_NEAR(h.delivered[b], 0.08 + 0.04 + 0.001, 1e-12);
}

TEST(Network, TwoHopStoreAndForward) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const auto path = route(h.topo, h.assoc, t, h.topo.cloud());
  const MessageId id = h.send(MessageKind::DemandData, t, h.topo.cloud(), 4'000'000);
  h.run();
  const double oracle = idle_path(h.topo, path, 4'000'000);
  EXPECT_NEAR(oracle, 0.64 + 0.001 + 0.032 + 0.005, 1e-12);
  EXPECT_NEAR(h.delivered[id], oracle, 1e-12);
  EXPECT_EQ(h.net.message(id).hops_done, 2u);
}

TEST(Network, FiberSerializesAcrossTerminals) {
  Harness h;
  // Two terminals on the same edge: separate uplinks, shared fiber.
  const MessageId a = h.send(MessageKind::DemandData, h.topo.terminal(0), h.topo.cloud(), 1'000'000);
  const MessageId b = h.send(MessageKind::DemandData, h.topo.terminal(2), h.topo.cloud(), 1'000'000);
  h.run();
  const double up = 0.16 + 0.001;
  EXPECT_NEAR(h.delivered[a], up + 0.008 + 0.005, 1e-12);
  EXPECT_NEAR(h.delivered[b], up + 0.016 + 0.005, 1e-12);
}

TEST(Network, AbortWithNothingInFlight) {
  Harness h;
  EXPECT_TRUE(h.net.abort_inflight(h.topo.terminal(0)).empty());
  EXPECT_EQ(h.net.counters().aborted, 0u);
}

TEST(Network, AbortHalfSerializedUplink) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const MessageId id = h.send(MessageKind::DemandData, t, h.topo.cloud(), 4'000'000);
  std::vector<AbortedTransfer> aborted;
  h.at(0.32, [&] { aborted = h.net.abort_inflight(t); });
  h.run();
  ASSERT_EQ(aborted.size(), 1u);
  EXPECT_EQ(aborted[0].id, id);
  EXPECT_EQ(aborted[0].sender, t);
  EXPECT_TRUE(aborted[0].started);
  EXPECT_NEAR(aborted[0].wasted_bytes, 2'000'000.0, 1e-6);
  EXPECT_EQ(h.net.message(id).state, MessageState::Aborted);
  EXPECT_FALSE(h.delivered.contains(id));
  EXPECT_NEAR(h.net.counters().bytes_wasted, 2'000'000.0, 1e-6);
  // The link is free again from the abort instant.
  EXPECT_NEAR(h.net.link_free_at(h.net.message(id).link), 0.32, 1e-12);
}

TEST(Network, AbortCoversBothDirectionsButNotFiber) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const NodeId e = h.topo.edge(0);
  const MessageId up = h.send(MessageKind::DemandData, t, e, 1'000'000);    // 0.16 s
  const MessageId down = h.send(MessageKind::ResultData, e, t, 4'000'000);  // 0.16 s
  const MessageId queued = h.send(MessageKind::StatusSummary, t, e, 2'250); // waits behind `up`
  const MessageId fiber = h.send(MessageKind::DemandData, e, h.topo.cloud(), 100'000'000);
  std::vector<AbortedTransfer> aborted;
  h.at(0.1, [&] { aborted = h.net.abort_inflight(t); });
  h.run();
  ASSERT_EQ(aborted.size(), 3u);
  std::map<MessageId, AbortedTransfer> by_id;
  for (const auto& a : aborted) by_id[a.id] = a;
  EXPECT_EQ(by_id.at(up).sender, t);
  EXPECT_EQ(by_id.at(down).sender, e);
  EXPECT_FALSE(by_id.at(queued).started);
  EXPECT_EQ(by_id.at(queued).wasted_bytes, 0.0);
  EXPECT_NEAR(by_id.at(down).wasted_bytes, 0.1 / 0.16 * 4'000'000, 1e-3);
  EXPECT_TRUE(h.delivered.contains(fiber));
}

TEST(Network, AbortSparesPropagatingMessages) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const MessageId id = h.send(MessageKind::StatusSummary, t, h.topo.edge(0), 6'250);  // done at 0.001
  h.at(0.0015, [&] { EXPECT_TRUE(h.net.abort_inflight(t).empty()); });
  h.run();
  EXPECT_TRUE(h.delivered.contains(id));
}

TEST(Network, HopByHopReroutesAfterReassociation) {
  Harness h;
  const NodeId t = h.topo.terminal(0);
  const MessageId id = h.send(MessageKind::ResultData, h.topo.cloud(), t, 1'000);
  h.assoc.associate(t, h.topo.edge(1));
  h.run();
  const Message& m = h.net.message(id);
  EXPECT_EQ(m.state, MessageState::Delivered);
  EXPECT_TRUE(m.rerouted);
  EXPECT_EQ(h.topo.link(m.link).from, h.topo.edge(1));
}

TEST(Network, ConservationOfBytes) {
  Harness h;
  for (std::uint32_t i = 0; i < 10; ++i) {
    h.send(MessageKind::DemandData, h.topo.terminal(i), h.topo.cloud(), 100'000 * (i + 1));
    h.send(MessageKind::ResultData, h.topo.cloud(), h.topo.terminal(i), 50'000);
  }
  h.at(0.05, [&] { h.net.abort_inflight(h.topo.terminal(3)); });
  h.run(0.02);
  const auto& c = h.net.counters();
  EXPECT_EQ(c.sent, c.delivered + c.aborted + h.net.in_flight());
  h.run();
  EXPECT_EQ(h.net.in_flight(), 0u);
  EXPECT_EQ(c.bytes_sent, c.bytes_delivered + c.bytes_aborted);
  EXPECT_GT(c.aborted, 0u);
}

TEST(Network, RejectsUnroutable) {
  Harness h;
  EXPECT_THROW(h.send(MessageKind::Feedback, h.topo.terminal(0), h.topo.terminal(0), 1), RoutingError);
  EXPECT_EQ(h.net.counters().sent, 0u);
}
