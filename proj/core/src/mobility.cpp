#include "dtsim/mobility.hpp"

#include <algorithm>

#include "dtsim/errors.hpp"

namespace dtsim {

std::vector<SimTime> tick_times(SimTime period, SimTime duration) {
  std::vector<SimTime> out;
  if (!(period > 0.0)) return out;
  for (std::uint64_t k = 1;; ++k) {
    const SimTime t = static_cast<double>(k) * period;
    if (t > duration) break;
    out.push_back(t);
  }
  return out;
}

MoverSelector::MoverSelector(std::uint64_t seed, MobilityPlan plan, std::vector<NodeId> candidates)
    : plan_(plan), candidates_(std::move(candidates)), stream_(seed, Substream::MoverSelection) {
  if (plan_.movers > candidates_.size()) throw ConfigError("more movers than eligible terminals");
}

std::vector<NodeId> MoverSelector::draw() {
  // Partial Fisher-Yates over a copy of the candidate list.
  std::vector<NodeId> pool = candidates_;
  for (std::uint32_t i = 0; i < plan_.movers; ++i) {
    const auto j = i + stream_.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(plan_.movers);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<NodeId> MoverSelector::next() {
  if (plan_.selection == MoverSelection::Resample) return draw();
  if (!fixed_) fixed_ = draw();
  return *fixed_;
}

NodeId pick_target(const Topology& topo, NodeId current, RandomStream& mobility) {
  const std::uint32_t edges = topo.edge_count();
  if (edges < 2) throw InvariantViolation("mobility needs at least two edges");
  const std::uint32_t cur = topo.index_of(current);
  if (edges == 2) return topo.edge(1 - cur);
  auto k = static_cast<std::uint32_t>(mobility.below(edges - 1));
  if (k >= cur) ++k;
  return topo.edge(k);
}

}  // namespace dtsim
