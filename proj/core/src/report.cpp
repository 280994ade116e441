#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtsim/errors.hpp"
#include "dtsim/metrics.hpp"

namespace dtsim {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCsvHeader =
    "demand_id,origin,class,serving_layer,t_created,t_completed,latency_s,queue_wait_s,transmission_s,compute_s,"
    "buffering_s,signaling_bytes,handover_affected";

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json series_json(const LatencySeries& s) {
  Json arr = Json::array();
  for (const auto& v : s) arr.push_back(opt(v));
  return arr;
}

Json stats_json(const LatencyStats& s) {
  Json j;
  j["mean_s"] = opt(s.mean);
  j["median_s"] = opt(s.median);
  j["p95_s"] = opt(s.p95);
  return j;
}

Json volatility_json(const Volatility& v) {
  Json j;
  j["sd_s"] = opt(v.sd);
  j["cv"] = opt(v.cv);
  return j;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError("records csv line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InvariantViolation("format_double failed");
  return std::string(buf, ptr);
}

void write_records_csv(std::ostream& os, std::span<const DemandRecord> records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.demand_id << ',' << r.origin << ',' << to_string(r.cls) << ',' << to_string(r.serving_layer) << ','
       << format_double(r.t_created) << ',' << format_double(r.t_completed) << ',' << format_double(r.latency_s) << ','
       << format_double(r.queue_wait_s) << ',' << format_double(r.transmission_s) << ',' << format_double(r.compute_s)
       << ',' << format_double(r.buffering_s) << ',' << r.signaling_bytes << ',' << (r.handover_affected ? 1 : 0)
       << '\n';
  }
}

std::vector<DemandRecord> parse_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw IoError("records csv: missing or unexpected header");
  std::vector<DemandRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 13) throw IoError("records csv line " + std::to_string(lineno) + ": expected 13 fields");
    DemandRecord r;
    r.demand_id = parse_number<std::uint64_t>(f[0], lineno);
    r.origin = parse_number<std::uint32_t>(f[1], lineno);
    auto cls = parse_layer(f[2]);
    auto layer = parse_layer(f[3]);
    if (!cls || !layer) throw IoError("records csv line " + std::to_string(lineno) + ": bad layer");
    r.cls = *cls;
    r.serving_layer = *layer;
    r.t_created = parse_number<double>(f[4], lineno);
    r.t_completed = parse_number<double>(f[5], lineno);
    r.latency_s = parse_number<double>(f[6], lineno);
    r.queue_wait_s = parse_number<double>(f[7], lineno);
    r.transmission_s = parse_number<double>(f[8], lineno);
    r.compute_s = parse_number<double>(f[9], lineno);
    r.buffering_s = parse_number<double>(f[10], lineno);
    r.signaling_bytes = parse_number<std::uint64_t>(f[11], lineno);
    const auto flag = parse_number<int>(f[12], lineno);
    if (flag != 0 && flag != 1) throw IoError("records csv line " + std::to_string(lineno) + ": bad flag");
    r.handover_affected = flag == 1;
    out.push_back(r);
  }
  return out;
}

void write_records_json(std::ostream& os, std::span<const DemandRecord> records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json j;
    j["demand_id"] = r.demand_id;
    j["origin"] = r.origin;
    j["class"] = to_string(r.cls);
    j["serving_layer"] = to_string(r.serving_layer);
    j["t_created"] = r.t_created;
    j["t_completed"] = r.t_completed;
    j["latency_s"] = r.latency_s;
    j["queue_wait_s"] = r.queue_wait_s;
    j["transmission_s"] = r.transmission_s;
    j["compute_s"] = r.compute_s;
    j["buffering_s"] = r.buffering_s;
    j["signaling_bytes"] = r.signaling_bytes;
    j["handover_affected"] = r.handover_affected;
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

std::string summary_to_json(const RunSummary& s) {
  Json j;
  j["mode"] = s.mode;
  j["seed"] = s.seed;
  j["duration_s"] = s.duration_s;
  j["status"] = s.status;
  j["diagnostic"] = s.diagnostic;
  j["demands"] = {{"generated", s.generated}, {"completed", s.completed}, {"failed", s.failed}, {"pending", s.pending}};
  j["latency"] = stats_json(s.latency);
  j["volatility"] = volatility_json(s.volatility);
  j["per_second_latency_s"] = series_json(s.per_second_latency_s);
  Json served;
  Json sig;
  for (std::size_t l = 0; l < 3; ++l) {
    served[to_string(static_cast<Layer>(l))] = s.served_by_layer[l];
    sig[to_string(static_cast<Layer>(l))] = opt(s.signaling_per_demand_by_layer[l]);
  }
  j["served_by_layer"] = served;
  j["signaling_per_demand_bytes_by_layer"] = sig;
  j["signaling_per_demand_bytes"] = opt(s.signaling_per_demand);
  j["ledger_bytes"] = {{"per_demand_signaling", s.signaling_demand_bytes},
                       {"maintenance", s.signaling_maintenance_bytes},
                       {"model_update", s.model_update_bytes},
                       {"retransmission", s.retransmission_bytes},
                       {"data", s.data_bytes}};
  j["model_update_bytes"] = s.model_update_bytes;
  j["handovers"] = s.handovers;
  j["aborted_transfers"] = s.aborted_transfers;
  j["restarted_transfers"] = s.restarted_transfers;
  j["wasted_bytes"] = s.wasted_bytes;
  j["escalations"] = s.escalations;
  j["anomaly_flags"] = s.anomaly_flags;
  j["messages"] = {{"sent", s.messages_sent},
                   {"delivered", s.messages_delivered},
                   {"aborted", s.messages_aborted},
                   {"in_flight", s.messages_in_flight}};
  j["events_dispatched"] = s.events_dispatched;
  j["trace_digest"] = s.trace_digest;
  return j.dump(2) + "\n";
}

std::string comparison_to_json(const Comparison& c) {
  Json j;
  j["seed"] = c.seed;
  j["duration_s"] = c.duration_s;
  j["centralized"] = {{"latency", stats_json(c.centralized)},
                      {"volatility", volatility_json(c.centralized_volatility)},
                      {"signaling_per_demand_bytes", opt(c.centralized_signaling_per_demand)}};
  j["multilayer"] = {{"latency", stats_json(c.multilayer)},
                     {"volatility", volatility_json(c.multilayer_volatility)},
                     {"signaling_per_demand_bytes", opt(c.multilayer_signaling_per_demand)}};
  j["latency_delta_s"] = opt(c.latency_delta_s);
  j["volatility_ratio"] = opt(c.volatility_ratio);
  j["sd_ratio"] = opt(c.sd_ratio);
  return j.dump(2) + "\n";
}

}  // namespace dtsim
