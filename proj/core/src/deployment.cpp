#include "dtsim/deployment.hpp"

namespace dtsim {

const char* to_string(DeploymentMode mode) {
  return mode == DeploymentMode::Centralized ? "centralized" : "multilayer";
}

std::optional<DeploymentMode> parse_mode(std::string_view s) {
  if (s == "centralized") return DeploymentMode::Centralized;
  if (s == "multilayer") return DeploymentMode::MultiLayer;
  return std::nullopt;
}

ServingDecision decide(DemandClass cls, DeploymentMode mode, const PolicyState& state) {
  if (mode == DeploymentMode::Centralized) {
    return {Layer::Cloud, Payload::Raw, ServingPath::TerminalEdgeCloud, BudgetId::Centralized, false};
  }
  switch (cls) {
    case DemandClass::Local:
      return {Layer::Local, Payload::Semantic, ServingPath::OnTerminal, BudgetId::LocalServed, false};
    case DemandClass::Edge:
      if (state.edge_wait_s && *state.edge_wait_s > state.escalation_wait_s) {
        return {Layer::Cloud, Payload::Semantic, ServingPath::TerminalEdgeCloud, BudgetId::CloudServed, true};
      }
      return {Layer::Edge, Payload::Semantic, ServingPath::TerminalEdge, BudgetId::EdgeServed, false};
    case DemandClass::Cloud:
      return {Layer::Cloud, Payload::Semantic, ServingPath::TerminalEdgeCloud, BudgetId::CloudServed, false};
  }
  return {};
}

}  // namespace dtsim
