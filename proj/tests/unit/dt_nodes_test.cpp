#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dtsim/dt_nodes.hpp"
#include "dtsim/errors.hpp"

using namespace dtsim;

namespace {

bool brute_force_flag(const std::vector<double>& w, double v) {
  double mean = 0.0;
  for (double x : w) mean += x;
  mean /= static_cast<double>(w.size());
  double var = 0.0;
  for (double x : w) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(w.size()));
  return sd == 0.0 ? v != mean : std::abs(v - mean) > 3.0 * sd;
}

}  // namespace

TEST(Anomaly, ZeroVarianceWindow) {
  const std::vector<double> w{10, 10, 10, 10};
  EXPECT_FALSE(anomaly_check(w, 10.0));
  EXPECT_TRUE(anomaly_check(w, 50.0));
}

TEST(Anomaly, ThreeSigmaRule) {
  const std::vector<double> w{95, 105, 95, 105, 95, 105};
  EXPECT_TRUE(brute_force_flag(w, 120.0));
  EXPECT_TRUE(anomaly_check(w, 120.0));
  EXPECT_FALSE(anomaly_check(w, 114.0));
  EXPECT_FALSE(anomaly_check(w, 85.5));
}

TEST(Anomaly, NeedsTwoObservations) {
  EXPECT_FALSE(anomaly_check(std::vector<double>{}, 5.0));
  EXPECT_FALSE(anomaly_check(std::vector<double>{1.0}, 500.0));
}

TEST(Anomaly, AgreesWithBruteForceOnIrregularWindows) {
  std::vector<double> w;
  for (int i = 0; i < 32; ++i) w.push_back(1.0 + 0.1 * std::sin(i * 1.7));
  for (double v = 0.5; v < 1.5; v += 0.01) EXPECT_EQ(anomaly_check(w, v), brute_force_flag(w, v)) << v;
}

TEST(EdgeDT, StatusGapAnomaly) {
  EdgeDT e(NodeId{10}, 20.0, EdgeParams{});
  const NodeId t{0};
  EXPECT_FALSE(e.observe_status(t, 0.0));
  for (int i = 1; i <= 5; ++i) EXPECT_FALSE(e.observe_status(t, i * 1.0));
  EXPECT_TRUE(e.observe_status(t, 50.0));
  EXPECT_EQ(e.anomalies(), 1u);
}

TEST(EdgeDT, ForwardAccumulatesUntilThreshold) {
  EdgeParams p;
  p.forward_fraction = 0.1;
  EdgeDT e(NodeId{10}, 20.0, p);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(e.accumulate_forward(2250, 2250), 0u);
  EXPECT_EQ(e.accumulate_forward(2250, 2250), 2250u);
  EXPECT_EQ(e.accumulate_forward(2250, 0), 0u);
}

TEST(EdgeDT, PoolAdmitEvict) {
  EdgeDT e1(NodeId{11}, 20.0, EdgeParams{});
  e1.admit(NodeId{3});
  EXPECT_TRUE(e1.hosts(NodeId{3}));
  EXPECT_THROW(e1.admit(NodeId{3}), InvariantViolation);
  e1.evict(NodeId{3});
  EXPECT_THROW(e1.evict(NodeId{3}), InvariantViolation);
}

TEST(AgentRegistry, ExactlyOnePoolThroughMigration) {
  std::vector<EdgeDT> edges{EdgeDT(NodeId{10}, 20.0, {}), EdgeDT(NodeId{11}, 20.0, {})};
  AgentRegistry reg;
  reg.add(NodeId{3}, NodeId{10}, 1000);
  edges[0].admit(NodeId{3});
  EXPECT_FALSE(check_agent_pools(reg, edges).has_value());

  edges[0].evict(NodeId{3});
  EXPECT_TRUE(check_agent_pools(reg, edges).has_value());  // not yet marked as migrating
  reg.begin_migration(NodeId{3}, NodeId{11});
  EXPECT_FALSE(check_agent_pools(reg, edges).has_value());
  reg.retarget(NodeId{3}, NodeId{10});
  reg.retarget(NodeId{3}, NodeId{11});
  edges[1].admit(NodeId{3});
  EXPECT_TRUE(check_agent_pools(reg, edges).has_value());  // admitted but registry still migrating
  reg.end_migration(NodeId{3}, NodeId{11});
  EXPECT_FALSE(check_agent_pools(reg, edges).has_value());

  edges[0].admit(NodeId{3});
  auto diag = check_agent_pools(reg, edges);
  ASSERT_TRUE(diag.has_value());
  EXPECT_NE(diag->find("2 pools"), std::string::npos);
}

TEST(AgentRegistry, Errors) {
  AgentRegistry reg;
  reg.add(NodeId{1}, NodeId{10}, 0);
  EXPECT_THROW(reg.add(NodeId{1}, NodeId{11}, 0), InvariantViolation);
  EXPECT_THROW(reg.retarget(NodeId{1}, NodeId{11}), InvariantViolation);
  EXPECT_THROW(reg.end_migration(NodeId{1}, NodeId{11}), InvariantViolation);
  reg.begin_migration(NodeId{1}, NodeId{11});
  EXPECT_THROW(reg.begin_migration(NodeId{1}, NodeId{10}), InvariantViolation);

  std::vector<EdgeDT> edges{EdgeDT(NodeId{10}, 20.0, {})};
  edges[0].admit(NodeId{7});
  EXPECT_TRUE(check_agent_pools(reg, edges).has_value());
}

TEST(CloudDT, ModelUpdatesGate) {
  CloudDT c(NodeId{12}, 500.0, ModelUpdateParams{0.0, 100});
  EXPECT_FALSE(c.model_updates_enabled());
  CloudDT d(NodeId{12}, 500.0, ModelUpdateParams{});
  EXPECT_TRUE(d.model_updates_enabled());
  EXPECT_EQ(d.queue.discipline(), Discipline::Fifo);
}

TEST(CloudDT, ServiceTimes) {
  CloudDT c(NodeId{12}, 500.0, ModelUpdateParams{});
  auto a = c.queue.submit(ComputeJob{1, 30.0, Priority::Normal, 0.0}, 0.0);
  ASSERT_TRUE(a.has_value());
  EXPECT_DOUBLE_EQ(a->finish - a->start, 0.06);
  EXPECT_FALSE(c.queue.submit(ComputeJob{2, 60.0, Priority::Normal, 1e-6}, 1e-6).has_value());
  auto [done, next] = c.queue.finish(a->finish);
  EXPECT_EQ(done.job.demand, 1u);
  ASSERT_TRUE(next.has_value());
  EXPECT_EQ(next->job.demand, 2u);
  EXPECT_DOUBLE_EQ(next->finish - next->start, 0.12);
}
