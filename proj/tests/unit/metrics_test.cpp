#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtsim/errors.hpp"
#include "dtsim/metrics.hpp"

using namespace dtsim;

namespace {

DemandRecord rec(DemandId id, double created, double completed, Layer layer = Layer::Edge, std::uint64_t sig = 4500) {
  DemandRecord r;
  r.demand_id = id;
  r.origin = static_cast<std::uint32_t>(id % 10);
  r.cls = layer;
  r.serving_layer = layer;
  r.t_created = created;
  r.t_completed = completed;
  r.latency_s = completed - created;
  r.transmission_s = 0.25 * r.latency_s;
  r.compute_s = r.latency_s - r.transmission_s;
  r.signaling_bytes = sig;
  return r;
}

Message msg(MessageKind kind, std::uint64_t size, std::optional<DemandId> demand = std::nullopt) {
  Message m;
  m.kind = kind;
  m.size = size;
  m.demand = demand;
  return m;
}

}  // namespace

TEST(SignalingBudget, Totals) {
  const SignalingBudget b;
  EXPECT_EQ(b.total(BudgetId::LocalServed), 3500u);
  EXPECT_EQ(b.total(BudgetId::EdgeServed), 4500u);
  EXPECT_EQ(b.total(BudgetId::CloudServed), 6500u);
  EXPECT_EQ(b.total(BudgetId::Centralized), 15000u);
}

TEST(Ledger, BucketsAndPerDemand) {
  MetricsLedger l;
  l.register_demand(0);
  l.register_demand(2);
  l.book(msg(MessageKind::StatusSummary, 2250, 0), LedgerBucket::PerDemand);
  l.book(msg(MessageKind::Feedback, 1250, 0), LedgerBucket::PerDemand);
  l.book(msg(MessageKind::DemandPacket, 1000, 2), LedgerBucket::PerDemand);
  l.book(msg(MessageKind::ModelUpdate, 100'000), LedgerBucket::ModelUpdate);
  l.book(msg(MessageKind::HandoverNotice, 200), LedgerBucket::Maintenance);
  l.book(msg(MessageKind::DemandData, 800'000, 0), LedgerBucket::DataVolume);
  EXPECT_EQ(l.demand_signaling(0), 3500u);
  EXPECT_EQ(l.demand_signaling(2), 1000u);
  EXPECT_EQ(l.bucket(LedgerBucket::DataVolume), 800'000u);
  EXPECT_EQ(l.control_total(), 3500u + 1000u + 100'000u + 200u);
  EXPECT_EQ(l.booked_messages(), 6u);
}

TEST(Ledger, Errors) {
  MetricsLedger l;
  l.register_demand(0);
  EXPECT_THROW(l.book(msg(MessageKind::Feedback, 10, 5), LedgerBucket::PerDemand), InvariantViolation);
  EXPECT_THROW(l.book(msg(MessageKind::Feedback, 10), LedgerBucket::PerDemand), InvariantViolation);
  EXPECT_THROW(l.book(msg(MessageKind::DemandData, 10, 0), LedgerBucket::PerDemand), InvariantViolation);
  EXPECT_THROW(l.book(msg(MessageKind::StatusSummary, 10, 0), LedgerBucket::DataVolume), InvariantViolation);
  EXPECT_THROW(l.demand_signaling(1), InvariantViolation);
}

TEST(AccountSignaling, SumsControlOnlyAndSkipsRestarts) {
  std::vector<Message> ms{msg(MessageKind::StatusSummary, 6250, 4), msg(MessageKind::DemandPacket, 2500, 4),
                          msg(MessageKind::Feedback, 6250, 4), msg(MessageKind::DemandData, 4'000'000, 4),
                          msg(MessageKind::StatusSummary, 2250, 5)};
  Message restart = msg(MessageKind::StatusSummary, 6250, 4);
  restart.restart_of = 0;
  ms.push_back(restart);
  EXPECT_EQ(account_signaling(4, ms), 15000u);
  EXPECT_EQ(account_signaling(9, ms), 0u);
}

TEST(Series, BucketsByCompletionSecond) {
  const std::vector<DemandRecord> rs{rec(0, 2.8, 3.2)};
  auto s = per_second_series(rs, 5.0);
  ASSERT_EQ(s.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(s[i].has_value(), i == 3) << i;
  EXPECT_NEAR(*s[3], 0.4, 1e-12);
}

TEST(Series, MeanWithinBucketAndClampAtEnd) {
  const std::vector<DemandRecord> rs{rec(0, 0.1, 0.4), rec(1, 0.2, 0.7), rec(2, 9.0, 10.0)};
  auto s = per_second_series(rs, 10.0);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_NEAR(*s[0], 0.4, 1e-12);
  EXPECT_NEAR(*s[9], 1.0, 1e-12);
  EXPECT_TRUE(per_second_series({}, 0.0).empty());
}

TEST(Volatility, Examples) {
  auto v = volatility(LatencySeries{0.3, 0.5});
  ASSERT_TRUE(v.sd && v.cv);
  EXPECT_NEAR(*v.sd, 0.1, 1e-12);
  EXPECT_NEAR(*v.cv, 0.25, 1e-12);
  auto flat = volatility(LatencySeries{0.7, std::nullopt, 0.7, 0.7});
  EXPECT_EQ(*flat.sd, 0.0);
  EXPECT_EQ(*flat.cv, 0.0);
  EXPECT_FALSE(volatility(LatencySeries{0.7, std::nullopt}).sd.has_value());
}

TEST(LatencyStats, MeanMedianP95) {
  std::vector<DemandRecord> rs;
  for (int i = 0; i < 20; ++i) rs.push_back(rec(static_cast<DemandId>(i), 0.0, 0.1 * (i + 1)));
  auto s = latency_stats(rs);
  EXPECT_NEAR(*s.mean, 1.05, 1e-12);
  EXPECT_NEAR(*s.median, 1.05, 1e-12);
  EXPECT_NEAR(*s.p95, 1.9, 1e-12);
  auto empty = latency_stats({});
  EXPECT_FALSE(empty.mean || empty.median || empty.p95);
}

TEST(RecordsCsv, RoundTripIsExact) {
  std::vector<DemandRecord> rs{rec(0, 0.1, 0.43000000000000005, Layer::Local, 3500), rec(7, 1.0 / 3.0, 2.0, Layer::Cloud, 6500)};
  rs[1].cls = Layer::Edge;
  rs[1].buffering_s = 0.0123;
  rs[1].handover_affected = true;
  std::stringstream ss;
  write_records_csv(ss, rs);
  auto back = parse_records_csv(ss);
  EXPECT_EQ(back, rs);
}

TEST(RecordsCsv, EmptyRunIsHeaderOnly) {
  std::stringstream ss;
  write_records_csv(ss, {});
  std::string line;
  int lines = 0;
  while (std::getline(ss, line)) ++lines;
  EXPECT_EQ(lines, 1);
  std::stringstream again;
  write_records_csv(again, {});
  EXPECT_TRUE(parse_records_csv(again).empty());
}

TEST(RecordsCsv, MalformedInputThrows) {
  std::stringstream bad("not,a,header\n");
  EXPECT_THROW(parse_records_csv(bad), IoError);
  std::stringstream ss;
  write_records_csv(ss, std::vector<DemandRecord>{rec(0, 0.0, 1.0)});
  std::string text = ss.str();
  text.replace(text.rfind("4500"), 4, "45x0");
  std::stringstream broken(text);
  EXPECT_THROW(parse_records_csv(broken), IoError);
}

TEST(RecordsJson, OneObjectPerRecord) {
  std::stringstream ss;
  write_records_json(ss, std::vector<DemandRecord>{rec(3, 0.0, 0.5)});
  auto j = nlohmann::json::parse(ss.str());
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["demand_id"], 3);
  EXPECT_EQ(j[0]["serving_layer"], "edge");
  EXPECT_DOUBLE_EQ(j[0]["latency_s"].get<double>(), 0.5);
}

TEST(Summary, ZeroDemandsGiveNullStatistics) {
  RunSummary s;
  s.mode = "multilayer";
  s.duration_s = 3.0;
  summarize_records({}, s);
  auto j = nlohmann::json::parse(summary_to_json(s));
  EXPECT_TRUE(j["latency"]["mean_s"].is_null());
  EXPECT_TRUE(j["signaling_per_demand_bytes"].is_null());
  ASSERT_EQ(j["per_second_latency_s"].size(), 3u);
  EXPECT_TRUE(j["per_second_latency_s"][0].is_null());
}

TEST(Summary, SignalingPerLayer) {
  RunSummary s;
  s.duration_s = 10.0;
  std::vector<DemandRecord> rs{rec(0, 0.0, 0.3, Layer::Local, 3500), rec(1, 0.0, 0.3, Layer::Edge, 4500),
                               rec(2, 1.0, 1.3, Layer::Edge, 4500), rec(3, 1.0, 1.9, Layer::Cloud, 6500)};
  summarize_records(rs, s);
  EXPECT_EQ(*s.signaling_per_demand_by_layer[0], 3500.0);
  EXPECT_EQ(*s.signaling_per_demand_by_layer[1], 4500.0);
  EXPECT_EQ(*s.signaling_per_demand_by_layer[2], 6500.0);
  EXPECT_EQ(*s.signaling_per_demand, 19000.0 / 4.0);
  EXPECT_EQ(s.served_by_layer[1], 2u);
}

TEST(Comparison, DeltasMatchRecomputation) {
  std::vector<DemandRecord> c{rec(0, 0.0, 0.8, Layer::Cloud, 15000), rec(1, 1.0, 1.9, Layer::Cloud, 15000),
                              rec(2, 2.0, 2.7, Layer::Cloud, 15000)};
  std::vector<DemandRecord> m{rec(0, 0.0, 0.3), rec(1, 1.0, 1.35), rec(2, 2.0, 2.33)};
  auto cmp = compare_runs(c, m, 42, 3.0);
  const double cm = (0.8 + 0.9 + 0.7) / 3.0;
  const double mm = (0.3 + 0.35 + 0.33) / 3.0;
  EXPECT_NEAR(*cmp.latency_delta_s, cm - mm, 1e-12);
  auto sd = [](std::vector<double> v) {
    double mean = 0.0;
    for (double x : v) mean += x / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{std::sqrt(ss / static_cast<double>(v.size())), mean};
  };
  auto [csd, cmean] = sd({0.8, 0.9, 0.7});
  auto [msd, mmean] = sd({0.3, 0.35, 0.33});
  EXPECT_NEAR(*cmp.sd_ratio, csd / msd, 1e-9);
  EXPECT_NEAR(*cmp.volatility_ratio, (csd / cmean) / (msd / mmean), 1e-9);
  EXPECT_EQ(*cmp.centralized_signaling_per_demand, 15000.0);
  auto j = nlohmann::json::parse(comparison_to_json(cmp));
  EXPECT_EQ(j["seed"], 42);
}
