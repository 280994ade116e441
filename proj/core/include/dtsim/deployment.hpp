#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dtsim/demand.hpp"

namespace dtsim {

enum class DeploymentMode : std::uint8_t { Centralized, MultiLayer };

const char* to_string(DeploymentMode mode);
std::optional<DeploymentMode> parse_mode(std::string_view s);

enum class Payload : std::uint8_t { Raw, Semantic };

enum class ServingPath : std::uint8_t {
  OnTerminal,          // local compute only
  TerminalEdge,        // up to the edge and back
  TerminalEdgeCloud,   // up through the edge to the cloud and back
};

enum class BudgetId : std::uint8_t { LocalServed, EdgeServed, CloudServed, Centralized };

struct ServingDecision {
  Layer layer = Layer::Local;
  Payload payload = Payload::Semantic;
  ServingPath path = ServingPath::OnTerminal;
  BudgetId budget = BudgetId::LocalServed;
  bool escalated = false;
};

// What the deciding node knows. The edge wait estimate is only known at the edge.
struct PolicyState {
  std::optional<double> edge_wait_s;
  double escalation_wait_s = 0.5;
};

/// Serving decision for one demand.
///
/// Centralized: always the cloud, raw payload, centralized budget. Multi-layer:
/// the class picks the layer; an Edge-class demand escalates to the cloud when
/// the edge's estimated wait exceeds the threshold. Escalation only moves up.
ServingDecision decide(DemandClass cls, DeploymentMode mode, const PolicyState& state);

}  // namespace dtsim
