#include "dtsim/network.hpp"

#include <algorithm>

#include "dtsim/errors.hpp"

namespace dtsim {

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::DemandData: return "DemandData";
    case MessageKind::ResultData: return "ResultData";
    case MessageKind::StatusSummary: return "StatusSummary";
    case MessageKind::DemandPacket: return "DemandPacket";
    case MessageKind::Feedback: return "Feedback";
    case MessageKind::ModelUpdate: return "ModelUpdate";
    case MessageKind::HandoverNotice: return "HandoverNotice";
    case MessageKind::AgentMigration: return "AgentMigration";
    case MessageKind::DataForward: return "DataForward";
    case MessageKind::AnomalyFlag: return "AnomalyFlag";
    case MessageKind::PoolUpdate: return "PoolUpdate";
  }
  return "?";
}

Plane plane_of(MessageKind kind) {
  switch (kind) {
    case MessageKind::DemandData:
    case MessageKind::ResultData:
    case MessageKind::AgentMigration:
      return Plane::Data;
    default:
      return Plane::Control;
  }
}

Network::Network(const Topology& topo, Kernel& kernel)
    : topo_(topo), kernel_(kernel), links_(topo.links().size()) {}

MessageId Network::send(Message msg, const AssociationMap& assoc) {
  auto path = route(topo_, assoc, msg.src, msg.dst);
  msg.id = messages_.size();
  msg.created_at = kernel_.now();
  msg.state = MessageState::InFlight;
  msg.at = msg.src;
  msg.planned = std::move(path);
  messages_.push_back(std::move(msg));
  Message& m = messages_.back();
  ++counters_.sent;
  counters_.bytes_sent += m.size;
  const LinkIndex first = m.planned.front();
  m.planned.erase(m.planned.begin());
  enqueue(m, first);
  return m.id;
}

void Network::enqueue(Message& m, LinkIndex link) {
  const LinkSpec& spec = topo_.link(link);
  LinkState& ls = links_[link];
  const SimTime now = kernel_.now();
  m.link = link;
  m.hop_enqueued = now;
  m.hop_start = std::max(now, ls.free_at);
  m.hop_finish = m.hop_start + transmission_time(m.size, spec.bandwidth_bps);
  m.hop_arrival = m.hop_finish + spec.propagation;
  ls.free_at = m.hop_finish;
  ls.occupants.push_back(m.id);
  m.arrival_event = kernel_.schedule(m.hop_arrival, EventKind::MessageHopDone, m.id);
}

HopArrival Network::arrive(MessageId id) {
  Message& m = messages_.at(id);
  if (m.state != MessageState::InFlight) throw InvariantViolation("network: arrival for a finished message");
  LinkState& ls = links_[m.link];
  // Serialization finished no later than arrival, so the message left the occupant list head.
  auto it = std::find(ls.occupants.begin(), ls.occupants.end(), id);
  if (it != ls.occupants.end()) ls.occupants.erase(it);
  m.at = topo_.link(m.link).to;
  ++m.hops_done;
  HopArrival out{m.at, m.at == m.dst, m.hop_enqueued, m.hop_start, m.hop_arrival};
  if (out.at_destination) {
    m.state = MessageState::Delivered;
    ++counters_.delivered;
    counters_.bytes_delivered += m.size;
  }
  return out;
}

void Network::forward(MessageId id, const AssociationMap& assoc) {
  Message& m = messages_.at(id);
  if (m.state != MessageState::InFlight || m.at == m.dst) throw InvariantViolation("network: forward of a non-transit message");
  auto path = route(topo_, assoc, m.at, m.dst);
  if (!m.planned.empty() && m.planned != path) m.rerouted = true;
  m.planned = std::move(path);
  const LinkIndex next = m.planned.front();
  m.planned.erase(m.planned.begin());
  enqueue(m, next);
}

void Network::redirect(MessageId id, NodeId new_dst) {
  Message& m = messages_.at(id);
  if (m.state != MessageState::InFlight) throw InvariantViolation("network: redirect of a finished message");
  if (m.dst != new_dst) {
    m.dst = new_dst;
    m.planned.clear();
  }
}

void Network::abandon(MessageId id) {
  Message& m = messages_.at(id);
  if (m.state != MessageState::InFlight) return;
  m.state = MessageState::Aborted;
  ++counters_.aborted;
  counters_.bytes_aborted += m.size;
}

std::vector<AbortedTransfer> Network::abort_inflight(NodeId terminal) {
  std::vector<AbortedTransfer> out;
  const SimTime now = kernel_.now();
  for (LinkIndex l = 0; l < topo_.links().size(); ++l) {
    const LinkSpec& spec = topo_.link(l);
    if (spec.kind == LinkKind::FiberUp || spec.kind == LinkKind::FiberDown) continue;
    if (spec.from != terminal && spec.to != terminal) continue;
    LinkState& ls = links_[l];
    std::deque<MessageId> keep;
    for (MessageId id : ls.occupants) {
      Message& m = messages_[id];
      if (m.hop_finish <= now) {
        keep.push_back(id);  // fully serialized, propagating
        continue;
      }
      AbortedTransfer a;
      a.id = id;
      a.sender = spec.from;
      a.started = m.hop_start < now;
      a.hop_enqueued = m.hop_enqueued;
      a.hop_start = m.hop_start;
      if (a.started) {
        const double fraction = (now - m.hop_start) / (m.hop_finish - m.hop_start);
        a.wasted_bytes = fraction * static_cast<double>(m.size);
      }
      kernel_.cancel(m.arrival_event);
      m.state = MessageState::Aborted;
      ++counters_.aborted;
      counters_.bytes_aborted += m.size;
      counters_.bytes_wasted += a.wasted_bytes;
      out.push_back(a);
    }
    ls.occupants = std::move(keep);
    ls.free_at = std::min(ls.free_at, now);
    for (MessageId id : ls.occupants) ls.free_at = std::max(ls.free_at, messages_[id].hop_finish);
  }
  return out;
}

}  // namespace dtsim
