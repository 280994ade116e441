#include "dtsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dtsim/errors.hpp"

namespace dtsim {

std::uint64_t SignalingBudget::total(BudgetId budget) const {
  const std::uint64_t local = status_summary + result_report + 2 * header;
  const std::uint64_t edge = local + demand_packet + header;
  switch (budget) {
    case BudgetId::LocalServed: return local;
    case BudgetId::EdgeServed: return edge;
    case BudgetId::CloudServed: return edge + 2 * cloud_control + 2 * header;
    case BudgetId::Centralized: return centralized_status + centralized_request + centralized_feedback + 3 * header;
  }
  return 0;
}

DemandRecord make_record(const Demand& d) {
  if (d.status != DemandStatus::Completed || !d.t_completed || !d.serving_layer) {
    throw InvariantViolation("record: demand " + std::to_string(d.id) + " is not completed");
  }
  DemandRecord r;
  r.demand_id = d.id;
  r.origin = d.origin.value;
  r.cls = d.cls;
  r.serving_layer = *d.serving_layer;
  r.t_created = d.t_created;
  r.t_completed = *d.t_completed;
  r.latency_s = *d.t_completed - d.t_created;
  r.queue_wait_s = d.breakdown.queue_wait;
  r.transmission_s = d.breakdown.transmission;
  r.compute_s = d.breakdown.compute;
  r.buffering_s = d.breakdown.buffering;
  r.signaling_bytes = d.signaling_bytes;
  r.handover_affected = d.handover_affected;
  return r;
}

void MetricsLedger::register_demand(DemandId id) {
  if (id >= per_demand_.size()) {
    per_demand_.resize(id + 1, 0);
    known_.resize(id + 1, false);
  }
  known_[id] = true;
}

void MetricsLedger::book(const Message& msg, LedgerBucket bucket) {
  if ((bucket == LedgerBucket::DataVolume) != (msg.plane() == Plane::Data)) {
    throw InvariantViolation(std::string("ledger: ") + to_string(msg.kind) + " booked to the wrong plane");
  }
  buckets_[static_cast<std::size_t>(bucket)] += msg.size;
  ++booked_;
  if (bucket == LedgerBucket::PerDemand) {
    if (!msg.demand || *msg.demand >= known_.size() || !known_[*msg.demand]) {
      throw InvariantViolation("ledger: signaling attributed to an unknown demand");
    }
    per_demand_[*msg.demand] += msg.size;
  }
}

std::uint64_t MetricsLedger::control_total() const {
  return bucket(LedgerBucket::PerDemand) + bucket(LedgerBucket::Maintenance) + bucket(LedgerBucket::ModelUpdate) +
         bucket(LedgerBucket::Retransmission);
}

std::uint64_t MetricsLedger::demand_signaling(DemandId id) const {
  if (id >= known_.size() || !known_[id]) throw InvariantViolation("ledger: unknown demand");
  return per_demand_[id];
}

std::uint64_t account_signaling(DemandId demand, std::span<const Message> messages) {
  std::uint64_t sum = 0;
  for (const auto& m : messages) {
    if (m.plane() == Plane::Control && m.demand == demand && !m.restart_of) sum += m.size;
  }
  return sum;
}

LatencySeries per_second_series(std::span<const DemandRecord> records, double duration_s) {
  const auto n = static_cast<std::size_t>(std::ceil(duration_s));
  std::vector<double> sum(n, 0.0);
  std::vector<std::uint64_t> count(n, 0);
  for (const auto& r : records) {
    if (n == 0) break;
    auto b = static_cast<std::size_t>(std::floor(std::max(0.0, r.t_completed)));
    b = std::min(b, n - 1);
    sum[b] += r.latency_s;
    ++count[b];
  }
  LatencySeries out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) out[i] = sum[i] / static_cast<double>(count[i]);
  }
  return out;
}

Volatility volatility(const LatencySeries& series) {
  std::vector<double> present;
  for (const auto& v : series) {
    if (v) present.push_back(*v);
  }
  if (present.size() < 2) return {};
  // Moments are taken about the first sample so a flat series has exactly zero spread.
  const double n = static_cast<double>(present.size());
  const double pivot = present.front();
  double shift = 0.0;
  for (double v : present) shift += v - pivot;
  shift /= n;
  double ss = 0.0;
  for (double v : present) ss += (v - pivot - shift) * (v - pivot - shift);
  const double mean = pivot + shift;
  Volatility out;
  out.sd = std::sqrt(ss / n);
  if (mean != 0.0) out.cv = *out.sd / mean;
  return out;
}

LatencyStats latency_stats(std::span<const DemandRecord> records) {
  LatencyStats s;
  if (records.empty()) return s;
  std::vector<double> lat;
  lat.reserve(records.size());
  for (const auto& r : records) lat.push_back(r.latency_s);
  std::sort(lat.begin(), lat.end());
  s.mean = std::accumulate(lat.begin(), lat.end(), 0.0) / static_cast<double>(lat.size());
  const std::size_t n = lat.size();
  s.median = n % 2 == 1 ? lat[n / 2] : 0.5 * (lat[n / 2 - 1] + lat[n / 2]);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95 = lat[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

void summarize_records(std::span<const DemandRecord> records, RunSummary& summary) {
  summary.per_second_latency_s = per_second_series(records, summary.duration_s);
  summary.latency = latency_stats(records);
  summary.volatility = volatility(summary.per_second_latency_s);
  std::array<std::uint64_t, 3> sig{};
  summary.served_by_layer = {};
  std::uint64_t sig_total = 0;
  for (const auto& r : records) {
    const auto l = static_cast<std::size_t>(r.serving_layer);
    ++summary.served_by_layer[l];
    sig[l] += r.signaling_bytes;
    sig_total += r.signaling_bytes;
  }
  for (std::size_t l = 0; l < 3; ++l) {
    summary.signaling_per_demand_by_layer[l].reset();
    if (summary.served_by_layer[l] > 0) {
      summary.signaling_per_demand_by_layer[l] =
          static_cast<double>(sig[l]) / static_cast<double>(summary.served_by_layer[l]);
    }
  }
  summary.signaling_per_demand.reset();
  if (!records.empty()) summary.signaling_per_demand = static_cast<double>(sig_total) / static_cast<double>(records.size());
}

Comparison compare_runs(std::span<const DemandRecord> centralized, std::span<const DemandRecord> multilayer,
                        std::uint64_t seed, double duration_s) {
  Comparison c;
  c.seed = seed;
  c.duration_s = duration_s;
  c.centralized = latency_stats(centralized);
  c.multilayer = latency_stats(multilayer);
  c.centralized_volatility = volatility(per_second_series(centralized, duration_s));
  c.multilayer_volatility = volatility(per_second_series(multilayer, duration_s));
  if (c.centralized.mean && c.multilayer.mean) c.latency_delta_s = *c.centralized.mean - *c.multilayer.mean;
  if (c.centralized_volatility.cv && c.multilayer_volatility.cv && *c.multilayer_volatility.cv != 0.0) {
    c.volatility_ratio = *c.centralized_volatility.cv / *c.multilayer_volatility.cv;
  }
  if (c.centralized_volatility.sd && c.multilayer_volatility.sd && *c.multilayer_volatility.sd != 0.0) {
    c.sd_ratio = *c.centralized_volatility.sd / *c.multilayer_volatility.sd;
  }
  auto mean_sig = [](std::span<const DemandRecord> rs) -> std::optional<double> {
    if (rs.empty()) return std::nullopt;
    double s = 0.0;
    for (const auto& r : rs) s += static_cast<double>(r.signaling_bytes);
    return s / static_cast<double>(rs.size());
  };
  c.centralized_signaling_per_demand = mean_sig(centralized);
  c.multilayer_signaling_per_demand = mean_sig(multilayer);
  return c;
}

}  // namespace dtsim
