#include "dtsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dtsim/errors.hpp"

namespace dtsim {

namespace {

// One config key: how to read it from text and write it back.
struct Field {
  std::string section;
  std::string key;
  std::function<std::optional<std::string>(ScenarioConfig&, std::string_view)> set;  // returns an error message
  std::function<std::string(const ScenarioConfig&)> get;
};

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename U>
std::optional<U> to_unsigned(std::string_view s) {
  U v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Field real(std::string section, std::string key, std::function<double&(ScenarioConfig&)> ref) {
  auto get = [ref](const ScenarioConfig& c) { return format_double(ref(const_cast<ScenarioConfig&>(c))); };
  auto set = [ref](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
    auto d = to_double(v);
    if (!d) return "expected a finite number, got '" + std::string(v) + "'";
    ref(c) = *d;
    return std::nullopt;
  };
  return {std::move(section), std::move(key), set, get};
}

template <typename U>
Field whole(std::string section, std::string key, std::function<U&(ScenarioConfig&)> ref) {
  auto get = [ref](const ScenarioConfig& c) { return std::to_string(ref(const_cast<ScenarioConfig&>(c))); };
  auto set = [ref](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
    auto d = to_unsigned<U>(v);
    if (!d) return "expected a non-negative integer, got '" + std::string(v) + "'";
    ref(c) = *d;
    return std::nullopt;
  };
  return {std::move(section), std::move(key), set, get};
}

Field flag(std::string section, std::string key, std::function<bool&(ScenarioConfig&)> ref) {
  auto get = [ref](const ScenarioConfig& c) { return std::string(ref(const_cast<ScenarioConfig&>(c)) ? "true" : "false"); };
  auto set = [ref](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
    if (v == "true") ref(c) = true;
    else if (v == "false") ref(c) = false;
    else return "expected true or false, got '" + std::string(v) + "'";
    return std::nullopt;
  };
  return {std::move(section), std::move(key), set, get};
}

void add_class_fields(std::vector<Field>& f, const std::string& name, DemandClass cls) {
  auto p = [cls](ScenarioConfig& c) -> ClassParams& { return c.class_params(cls); };
  f.push_back(real("workload", name + "_compute_gflop", [p](ScenarioConfig& c) -> double& { return p(c).compute_gflop; }));
  f.push_back(real("workload", name + "_raw_kb", [p](ScenarioConfig& c) -> double& { return p(c).raw_kb; }));
  f.push_back(real("workload", name + "_semantic_kb", [p](ScenarioConfig& c) -> double& { return p(c).semantic_kb; }));
  f.push_back(real("workload", name + "_result_kb", [p](ScenarioConfig& c) -> double& { return p(c).result_kb; }));
  f.push_back(Field{
      "workload", name + "_priority",
      [p](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
        auto pr = parse_priority(v);
        if (!pr) return "expected high, normal or low, got '" + std::string(v) + "'";
        p(c).priority = *pr;
        return std::nullopt;
      },
      [p](const ScenarioConfig& c) { return std::string(to_string(p(const_cast<ScenarioConfig&>(c)).priority)); }});
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    using C = ScenarioConfig;
    f.push_back(real("simulation", "duration_s", [](C& c) -> double& { return c.duration_s; }));
    f.push_back(whole<std::uint64_t>("simulation", "seed", [](C& c) -> std::uint64_t& { return c.seed; }));
    f.push_back(Field{"simulation", "deployment",
                      [](C& c, std::string_view v) -> std::optional<std::string> {
                        auto m = parse_mode(v);
                        if (!m) return "expected centralized or multilayer, got '" + std::string(v) + "'";
                        c.deployment = *m;
                        return std::nullopt;
                      },
                      [](const C& c) { return std::string(to_string(c.deployment)); }});

    f.push_back(whole<std::uint32_t>("topology", "terminals", [](C& c) -> std::uint32_t& { return c.terminals; }));
    f.push_back(whole<std::uint32_t>("topology", "edges", [](C& c) -> std::uint32_t& { return c.edges; }));
    f.push_back(real("topology", "wireless_uplink_mbps", [](C& c) -> double& { return c.wireless_uplink_mbps; }));
    f.push_back(real("topology", "wireless_downlink_mbps", [](C& c) -> double& { return c.wireless_downlink_mbps; }));
    f.push_back(real("topology", "fiber_gbps", [](C& c) -> double& { return c.fiber_gbps; }));
    f.push_back(real("topology", "wireless_prop_ms", [](C& c) -> double& { return c.wireless_prop_ms; }));
    f.push_back(real("topology", "fiber_prop_ms", [](C& c) -> double& { return c.fiber_prop_ms; }));

    f.push_back(real("compute", "terminal_gflops", [](C& c) -> double& { return c.terminal_gflops; }));
    f.push_back(real("compute", "edge_gflops", [](C& c) -> double& { return c.edge_gflops; }));
    f.push_back(real("compute", "cloud_gflops", [](C& c) -> double& { return c.cloud_gflops; }));
    f.push_back(real("compute", "centralized_cost_gflop", [](C& c) -> double& { return c.centralized_cost_gflop; }));

    f.push_back(real("workload", "rate_per_terminal", [](C& c) -> double& { return c.rate_per_terminal; }));
    f.push_back(real("workload", "mix_local", [](C& c) -> double& { return c.mix_local; }));
    f.push_back(real("workload", "mix_edge", [](C& c) -> double& { return c.mix_edge; }));
    f.push_back(real("workload", "mix_cloud", [](C& c) -> double& { return c.mix_cloud; }));
    add_class_fields(f, "local", DemandClass::Local);
    add_class_fields(f, "edge", DemandClass::Edge);
    add_class_fields(f, "cloud", DemandClass::Cloud);

    f.push_back(real("mobility", "switch_period_s", [](C& c) -> double& { return c.switch_period_s; }));
    f.push_back(whole<std::uint32_t>("mobility", "movers", [](C& c) -> std::uint32_t& { return c.movers; }));
    f.push_back(Field{"mobility", "selection",
                      [](C& c, std::string_view v) -> std::optional<std::string> {
                        if (v == "resample") c.selection = MoverSelection::Resample;
                        else if (v == "fixed") c.selection = MoverSelection::FixedSet;
                        else return "expected resample or fixed, got '" + std::string(v) + "'";
                        return std::nullopt;
                      },
                      [](const C& c) {
                        return std::string(c.selection == MoverSelection::Resample ? "resample" : "fixed");
                      }});

    f.push_back(real("handover", "agent_state_kb", [](C& c) -> double& { return c.agent_state_kb; }));

    f.push_back(real("edge", "escalation_wait_s", [](C& c) -> double& { return c.escalation_wait_s; }));
    f.push_back(whole<std::uint32_t>("edge", "anomaly_window", [](C& c) -> std::uint32_t& { return c.anomaly_window; }));
    f.push_back(real("edge", "forward_fraction", [](C& c) -> double& { return c.forward_fraction; }));

    f.push_back(real("model_update", "period_s", [](C& c) -> double& { return c.model_update_period_s; }));
    f.push_back(real("model_update", "size_kb", [](C& c) -> double& { return c.model_update_size_kb; }));

    auto sig = [&f](const std::string& key, std::uint64_t SignalingBudget::*member) {
      f.push_back(whole<std::uint64_t>("signaling", key, [member](C& c) -> std::uint64_t& { return c.signaling.*member; }));
    };
    sig("header_bytes", &SignalingBudget::header);
    sig("status_summary_bytes", &SignalingBudget::status_summary);
    sig("result_report_bytes", &SignalingBudget::result_report);
    sig("demand_packet_bytes", &SignalingBudget::demand_packet);
    sig("cloud_control_bytes", &SignalingBudget::cloud_control);
    sig("centralized_status_bytes", &SignalingBudget::centralized_status);
    sig("centralized_request_bytes", &SignalingBudget::centralized_request);
    sig("centralized_feedback_bytes", &SignalingBudget::centralized_feedback);
    sig("handover_notice_bytes", &SignalingBudget::handover_notice);
    sig("pool_notice_bytes", &SignalingBudget::pool_notice);
    sig("anomaly_flag_bytes", &SignalingBudget::anomaly_flag);

    f.push_back(flag("p2p", "enabled", [](C& c) -> bool& { return c.p2p_enabled; }));
    f.push_back(real("p2p", "bandwidth_mbps", [](C& c) -> double& { return c.p2p_bandwidth_mbps; }));
    f.push_back(whole<std::uint32_t>("p2p", "uncovered", [](C& c) -> std::uint32_t& { return c.uncovered; }));
    return f;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ClassParams& ScenarioConfig::class_params(DemandClass c) {
  switch (c) {
    case DemandClass::Local: return local;
    case DemandClass::Edge: return edge;
    case DemandClass::Cloud: return cloud;
  }
  return local;
}

const ClassParams& ScenarioConfig::class_params(DemandClass c) const {
  return const_cast<ScenarioConfig*>(this)->class_params(c);
}

std::uint64_t kb_to_bytes(double kb) { return static_cast<std::uint64_t>(std::llround(kb * 1000.0)); }

TopologyParams ScenarioConfig::topology() const {
  TopologyParams p;
  p.terminals = terminals;
  p.edges = edges;
  p.uplink_bps = wireless_uplink_mbps * 1e6;
  p.downlink_bps = wireless_downlink_mbps * 1e6;
  p.fiber_bps = fiber_gbps * 1e9;
  p.wireless_propagation = wireless_prop_ms / 1000.0;
  p.fiber_propagation = fiber_prop_ms / 1000.0;
  p.p2p_enabled = p2p_enabled;
  p.p2p_bps = p2p_bandwidth_mbps * 1e6;
  p.uncovered = uncovered;
  return p;
}

WorkloadConfig ScenarioConfig::workload() const {
  WorkloadConfig w;
  w.rate_per_terminal = rate_per_terminal;
  w.mix = {mix_local, mix_edge, mix_cloud};
  for (auto c : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    const auto& p = class_params(c);
    auto& s = w.specs[static_cast<std::size_t>(c)];
    s.compute_gflop = p.compute_gflop;
    s.raw_bytes = kb_to_bytes(p.raw_kb);
    s.semantic_bytes = kb_to_bytes(p.semantic_kb);
    s.result_bytes = kb_to_bytes(p.result_kb);
    s.priority = p.priority;
  }
  return w;
}

EdgeParams ScenarioConfig::edge_params() const { return {escalation_wait_s, anomaly_window, forward_fraction}; }

ModelUpdateParams ScenarioConfig::model_update() const {
  return {model_update_period_s, kb_to_bytes(model_update_size_kb)};
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  for (const auto& f : fields()) {
    if (f.get(a) != f.get(b)) return false;
  }
  return true;
}

std::string ValidationError::to_string() const {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ":" << column << ": ";
  if (!section.empty()) os << "[" << section << "]";
  if (!key.empty()) os << " " << key;
  if (!section.empty() || !key.empty()) os << ": ";
  os << message;
  return os.str();
}

std::vector<ValidationError> validate(const ScenarioConfig& c) {
  std::vector<ValidationError> e;
  auto err = [&e](std::string section, std::string key, std::string msg) {
    e.push_back({std::move(section), std::move(key), std::move(msg)});
  };
  auto positive = [&err](const std::string& s, const std::string& k, double v) {
    if (!(v > 0.0)) err(s, k, "must be > 0");
  };
  auto non_negative = [&err](const std::string& s, const std::string& k, double v) {
    if (!(v >= 0.0)) err(s, k, "must be >= 0");
  };

  positive("simulation", "duration_s", c.duration_s);
  if (c.terminals == 0) err("topology", "terminals", "must be >= 1");
  if (c.edges == 0) err("topology", "edges", "must be >= 1");
  positive("topology", "wireless_uplink_mbps", c.wireless_uplink_mbps);
  positive("topology", "wireless_downlink_mbps", c.wireless_downlink_mbps);
  positive("topology", "fiber_gbps", c.fiber_gbps);
  non_negative("topology", "wireless_prop_ms", c.wireless_prop_ms);
  non_negative("topology", "fiber_prop_ms", c.fiber_prop_ms);

  positive("compute", "terminal_gflops", c.terminal_gflops);
  positive("compute", "edge_gflops", c.edge_gflops);
  positive("compute", "cloud_gflops", c.cloud_gflops);
  non_negative("compute", "centralized_cost_gflop", c.centralized_cost_gflop);

  positive("workload", "rate_per_terminal", c.rate_per_terminal);
  const std::pair<const char*, double> mixes[] = {{"mix_local", c.mix_local}, {"mix_edge", c.mix_edge}, {"mix_cloud", c.mix_cloud}};
  for (const auto& [k, v] : mixes) {
    if (!(v >= 0.0 && v <= 1.0)) err("workload", k, "must lie in [0,1]");
  }
  const double sum = c.mix_local + c.mix_edge + c.mix_cloud;
  if (std::abs(sum - 1.0) > 1e-9) {
    err("workload", "mix_local", "mix_local + mix_edge + mix_cloud = " + format_double(sum) + ", must be 1");
  }
  for (auto cls : {DemandClass::Local, DemandClass::Edge, DemandClass::Cloud}) {
    const std::string n = to_string(cls);
    const auto& p = c.class_params(cls);
    non_negative("workload", n + "_compute_gflop", p.compute_gflop);
    non_negative("workload", n + "_raw_kb", p.raw_kb);
    non_negative("workload", n + "_semantic_kb", p.semantic_kb);
    non_negative("workload", n + "_result_kb", p.result_kb);
    if (kb_to_bytes(p.semantic_kb) > kb_to_bytes(p.raw_kb)) err("workload", n + "_semantic_kb", "must not exceed " + n + "_raw_kb");
  }

  positive("mobility", "switch_period_s", c.switch_period_s);
  const std::uint32_t covered = c.terminals >= c.uncovered ? c.terminals - c.uncovered : 0;
  if (c.movers > covered) {
    err("mobility", "movers", std::to_string(c.movers) + " movers exceed the " + std::to_string(covered) + " covered terminals");
  } else if (c.movers > 0 && c.edges < 2) {
    err("mobility", "movers", "mobility needs at least 2 edges");
  }
  non_negative("handover", "agent_state_kb", c.agent_state_kb);
  non_negative("edge", "escalation_wait_s", c.escalation_wait_s);
  if (c.anomaly_window < 2) err("edge", "anomaly_window", "must be >= 2");
  if (!(c.forward_fraction >= 0.0 && c.forward_fraction <= 1.0)) err("edge", "forward_fraction", "must lie in [0,1]");
  non_negative("model_update", "period_s", c.model_update_period_s);
  non_negative("model_update", "size_kb", c.model_update_size_kb);
  positive("p2p", "bandwidth_mbps", c.p2p_bandwidth_mbps);
  if (c.uncovered > c.terminals) err("p2p", "uncovered", "exceeds terminal count");
  else if (c.uncovered == c.terminals && c.terminals > 0) err("p2p", "uncovered", "at least one terminal must be covered");
  return e;
}

ParseResult parse_scenario(std::string_view text) {
  ParseResult result;
  ScenarioConfig cfg;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t col = static_cast<std::size_t>(line.data() - raw.data()) + 1;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        result.errors.push_back({"", "", "malformed section header", lineno, col});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& f : fields()) known = known || f.section == section;
      if (!known) result.errors.push_back({section, "", "unknown section", lineno, col});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      result.errors.push_back({section, "", "expected 'key = value'", lineno, col});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::size_t value_col =
        value.empty() ? col + eq + 1 : static_cast<std::size_t>(value.data() - raw.data()) + 1;
    if (section.empty()) {
      result.errors.push_back({"", key, "key outside of any section", lineno, col});
      continue;
    }
    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.section == section && f.key == key) field = &f;
    }
    if (field == nullptr) {
      result.errors.push_back({section, key, "unknown key", lineno, col});
      continue;
    }
    if (!seen.insert({section, key}).second) {
      result.errors.push_back({section, key, "duplicate key", lineno, col});
      continue;
    }
    if (auto msg = field->set(cfg, value)) result.errors.push_back({section, key, *msg, lineno, value_col});
  }
  for (auto& e : validate(cfg)) result.errors.push_back(std::move(e));
  if (result.errors.empty()) result.config = cfg;
  return result;
}

ParseResult load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize(const ScenarioConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

}  // namespace dtsim
