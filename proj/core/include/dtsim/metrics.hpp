#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtsim/demand.hpp"
#include "dtsim/deployment.hpp"
#include "dtsim/network.hpp"

namespace dtsim {

/// Control-plane byte components. Every control message carries one `header`.
///
/// Per-demand totals: Local-served = status + result report + 2 headers;
/// Edge-served adds the demand packet and its header; Cloud-served adds the
/// edge->cloud forward and cloud->edge return controls with their headers;
/// Centralized = status + request + feedback + 3 headers.
struct SignalingBudget {
  std::uint64_t header = 250;
  std::uint64_t status_summary = 2000;
  std::uint64_t result_report = 1000;
  std::uint64_t demand_packet = 750;
  std::uint64_t cloud_control = 750;
  std::uint64_t centralized_status = 6000;
  std::uint64_t centralized_request = 2250;
  std::uint64_t centralized_feedback = 6000;
  std::uint64_t handover_notice = 200;
  std::uint64_t pool_notice = 200;
  std::uint64_t anomaly_flag = 100;

  std::uint64_t total(BudgetId budget) const;
};

struct DemandRecord {
  DemandId demand_id = 0;
  std::uint32_t origin = 0;
  DemandClass cls = DemandClass::Local;
  Layer serving_layer = Layer::Local;
  double t_created = 0.0;
  double t_completed = 0.0;
  double latency_s = 0.0;
  double queue_wait_s = 0.0;
  double transmission_s = 0.0;
  double compute_s = 0.0;
  double buffering_s = 0.0;
  std::uint64_t signaling_bytes = 0;
  bool handover_affected = false;

  friend bool operator==(const DemandRecord&, const DemandRecord&) = default;
};

DemandRecord make_record(const Demand& d);

/// Byte ledger. Control messages land in PerDemand, Maintenance, ModelUpdate or
/// Retransmission; data-plane bytes land in DataVolume.
class MetricsLedger {
 public:
  void register_demand(DemandId id);
  // Books a newly sent message. PerDemand bytes are also attributed to the demand.
  void book(const Message& msg, LedgerBucket bucket);

  std::uint64_t bucket(LedgerBucket b) const { return buckets_[static_cast<std::size_t>(b)]; }
  std::uint64_t control_total() const;
  std::uint64_t demand_signaling(DemandId id) const;
  std::uint64_t booked_messages() const { return booked_; }

 private:
  std::array<std::uint64_t, 5> buckets_{};
  std::vector<std::uint64_t> per_demand_;  // indexed by dense demand id
  std::vector<bool> known_;
  std::uint64_t booked_ = 0;
};

// Control-plane bytes of first transmissions that reference `demand`.
std::uint64_t account_signaling(DemandId demand, std::span<const Message> messages);

using LatencySeries = std::vector<std::optional<double>>;

// Mean latency per floor(t_completed) second; ceil(duration) buckets, empty ones absent.
LatencySeries per_second_series(std::span<const DemandRecord> records, double duration_s);

struct Volatility {
  std::optional<double> sd;
  std::optional<double> cv;
};

// Population sd and sd/mean over present buckets; null below two buckets.
Volatility volatility(const LatencySeries& series);

struct LatencyStats {
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> p95;
};

LatencyStats latency_stats(std::span<const DemandRecord> records);

struct RunSummary {
  std::string mode;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  std::string status = "ok";
  std::string diagnostic;

  std::uint64_t generated = 0;
  std::uint64_t completed = 0;
  std::uint64_t failed = 0;
  std::uint64_t pending = 0;

  LatencySeries per_second_latency_s;
  LatencyStats latency;
  Volatility volatility;

  std::array<std::uint64_t, 3> served_by_layer{};
  std::array<std::optional<double>, 3> signaling_per_demand_by_layer{};
  std::optional<double> signaling_per_demand;

  std::uint64_t signaling_demand_bytes = 0;
  std::uint64_t signaling_maintenance_bytes = 0;
  std::uint64_t model_update_bytes = 0;
  std::uint64_t retransmission_bytes = 0;
  std::uint64_t data_bytes = 0;

  std::uint64_t handovers = 0;
  std::uint64_t aborted_transfers = 0;
  std::uint64_t restarted_transfers = 0;
  double wasted_bytes = 0.0;
  std::uint64_t escalations = 0;
  std::uint64_t anomaly_flags = 0;

  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_aborted = 0;
  std::uint64_t messages_in_flight = 0;

  std::uint64_t events_dispatched = 0;
  std::string trace_digest;
};

// Fills the record-derived fields (counts by layer, series, stats, volatility).
void summarize_records(std::span<const DemandRecord> records, RunSummary& summary);

// Shortest round-trip decimal form.
std::string format_double(double v);

void write_records_csv(std::ostream& os, std::span<const DemandRecord> records);
std::vector<DemandRecord> parse_records_csv(std::istream& is);  // throws IoError on malformed input
void write_records_json(std::ostream& os, std::span<const DemandRecord> records);

std::string summary_to_json(const RunSummary& summary);

struct Comparison {
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  LatencyStats centralized;
  LatencyStats multilayer;
  Volatility centralized_volatility;
  Volatility multilayer_volatility;
  std::optional<double> latency_delta_s;   // centralized mean - multilayer mean
  std::optional<double> volatility_ratio;  // cv centralized / cv multilayer
  std::optional<double> sd_ratio;
  std::optional<double> centralized_signaling_per_demand;
  std::optional<double> multilayer_signaling_per_demand;
};

Comparison compare_runs(std::span<const DemandRecord> centralized, std::span<const DemandRecord> multilayer,
                        std::uint64_t seed, double duration_s);
std::string comparison_to_json(const Comparison& c);

}  // namespace dtsim
