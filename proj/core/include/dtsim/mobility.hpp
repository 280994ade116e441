#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dtsim/kernel.hpp"
#include "dtsim/network.hpp"
#include "dtsim/rng.hpp"
#include "dtsim/topology.hpp"

namespace dtsim {

enum class MoverSelection : std::uint8_t { FixedSet, Resample };

struct MobilityPlan {
  SimTime switch_period = 1.0;
  std::uint32_t movers = 5;
  MoverSelection selection = MoverSelection::Resample;
};

struct HandoverRecord {
  NodeId terminal;
  NodeId from;
  NodeId to;
  SimTime t_start = 0.0;
  std::optional<SimTime> t_complete;  // empty while the handover is still running
  std::uint32_t buffered = 0;
  std::vector<MessageId> aborted;
};

// k * period for k = 1, 2, ... up to and including `duration`. Empty when the
// period is not positive.
std::vector<SimTime> tick_times(SimTime period, SimTime duration);

/// Picks which terminals move at each tick.
///
/// Candidates are the covered terminals. Fixed-set plans draw once and reuse
/// the set; resampling plans draw a fresh set every tick. Draws come from the
/// mover-selection substream only.
class MoverSelector {
 public:
  MoverSelector(std::uint64_t seed, MobilityPlan plan, std::vector<NodeId> candidates);

  // Ascending terminal ids.
  std::vector<NodeId> next();

 private:
  std::vector<NodeId> draw();

  MobilityPlan plan_;
  std::vector<NodeId> candidates_;
  RandomStream stream_;
  std::optional<std::vector<NodeId>> fixed_;
};

// New edge for a terminal currently at `current`: the other edge with two
// edges, otherwise uniform over the remaining edges (mobility substream).
NodeId pick_target(const Topology& topo, NodeId current, RandomStream& mobility);

}  // namespace dtsim
