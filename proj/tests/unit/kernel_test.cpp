#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dtsim/errors.hpp"
#include "dtsim/kernel.hpp"
#include "dtsim/rng.hpp"

using namespace dtsim;

namespace {

std::vector<Event> drain(Kernel& k, SimTime until) {
  std::vector<Event> seen;
  k.run_until(until, [&](const Event& e) { seen.push_back(e); });
  return seen;
}

}  // namespace

TEST(Kernel, PopsInTimeOrder) {
  Kernel k;
  k.schedule(2.0, EventKind::MobilityTick);
  k.schedule(1.0, EventKind::MobilityTick);
  auto seen = drain(k, 10.0);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0].time, 1.0);
  EXPECT_EQ(seen[1].time, 2.0);
}

TEST(Kernel, EqualTimesRunInInsertionOrder) {
  Kernel k;
  for (int i = 0; i < 7; ++i) k.schedule(0.5, EventKind::MobilityTick);
  const EventId a = k.schedule(1.0, EventKind::ComputeDone, 7);
  const EventId b = k.schedule(1.0, EventKind::DemandGenerated, 8);
  EXPECT_EQ(a, 7u);
  EXPECT_EQ(b, 8u);
  auto seen = drain(k, 10.0);
  ASSERT_EQ(seen.size(), 9u);
  EXPECT_EQ(seen[7].seq, 7u);
  EXPECT_EQ(seen[8].seq, 8u);
}

TEST(Kernel, SchedulingIntoThePastIsFatal) {
  Kernel k;
  k.schedule(1.0, EventKind::MobilityTick);
  drain(k, 1.0);
  EXPECT_THROW(k.schedule(k.now() - 0.1, EventKind::MobilityTick), InvariantViolation);
  EXPECT_THROW(k.schedule(std::nan(""), EventKind::MobilityTick), InvariantViolation);
}

TEST(Kernel, EmptyRunAdvancesClock) {
  Kernel k;
  int calls = 0;
  EXPECT_EQ(k.run_until(60.0, [&](const Event&) { ++calls; }), 60.0);
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(k.now(), 60.0);
}

TEST(Kernel, StopsAtHorizon) {
  Kernel k;
  for (double t : {1.0, 2.0, 3.0}) k.schedule(t, EventKind::MobilityTick);
  auto seen = drain(k, 2.5);
  EXPECT_EQ(seen.size(), 2u);
  EXPECT_EQ(k.now(), 2.5);
  EXPECT_EQ(k.pending(), 1u);
}

TEST(Kernel, RunUntilRejectsPastHorizon) {
  Kernel k;
  drain(k, 5.0);
  EXPECT_THROW(k.run_until(4.0, [](const Event&) {}), InvariantViolation);
}

TEST(Kernel, CancelledEventsNeverDispatch) {
  Kernel k;
  const EventId a = k.schedule(1.0, EventKind::MobilityTick, 1);
  k.schedule(2.0, EventKind::MobilityTick, 2);
  k.cancel(a);
  EXPECT_FALSE(k.is_live(a));
  EXPECT_THROW(k.cancel(a), InvariantViolation);
  auto seen = drain(k, 5.0);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].subject, 2u);
  EXPECT_EQ(k.pending(), 0u);
}

TEST(Kernel, DispatcherMayScheduleAtCurrentTime) {
  Kernel k;
  k.schedule(1.0, EventKind::MobilityTick, 0);
  std::vector<std::uint64_t> order;
  k.run_until(2.0, [&](const Event& e) {
    order.push_back(e.subject);
    if (e.subject == 0) k.schedule(k.now(), EventKind::MobilityTick, 1);
  });
  EXPECT_EQ(order, (std::vector<std::uint64_t>{0, 1}));
}

TEST(Kernel, DispatchErrorPropagates) {
  Kernel k;
  k.schedule(1.0, EventKind::MobilityTick);
  EXPECT_THROW(k.run_until(2.0, [](const Event&) { throw InvariantViolation("boom"); }), InvariantViolation);
}

TEST(Kernel, IdenticalSchedulesGiveIdenticalDigests) {
  auto build = [] {
    Kernel k;
    RandomStream s(42, Substream::Workload);
    SimTime t = 0.0;
    for (int i = 0; i < 200; ++i) {
      t += draw_exponential(s, 3.0);
      k.schedule(t, EventKind::DemandGenerated, static_cast<std::uint64_t>(i % 10));
    }
    std::vector<Event> trace;
    k.record_trace(&trace);
    k.run_until(1000.0, [](const Event&) {});
    return std::make_pair(k.trace_digest(), trace.size());
  };
  EXPECT_EQ(build(), build());
}

TEST(Kernel, TraceIsNonDecreasingInTime) {
  Kernel k;
  RandomStream s(7, Substream::Mobility);
  for (int i = 0; i < 500; ++i) k.schedule(s.uniform() * 10.0, EventKind::MobilityTick);
  std::vector<Event> trace;
  k.record_trace(&trace);
  k.run_until(10.0, [](const Event&) {});
  ASSERT_EQ(trace.size(), 500u);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    ASSERT_LE(trace[i - 1].time, trace[i].time);
    if (trace[i - 1].time == trace[i].time) ASSERT_LT(trace[i - 1].seq, trace[i].seq);
  }
}

TEST(Exponential, InverseCdfIdentity) {
  EXPECT_NEAR(exponential_from_uniform(std::exp(-1.0), 1.0), 1.0, 1e-15);
  EXPECT_EQ(exponential_from_uniform(1.0, 4.0), 0.0);
}

TEST(Exponential, RejectsNonPositiveRate) {
  RandomStream s(1, Substream::Workload);
  EXPECT_THROW(draw_exponential(s, 0.0), ConfigError);
  EXPECT_THROW(draw_exponential(s, -1.0), ConfigError);
  EXPECT_THROW(exponential_from_uniform(0.5, 0.0), ConfigError);
}

TEST(Exponential, SampleMeanMatchesOneOverRate) {
  RandomStream s(42, Substream::Workload);
  const double rate = 2.0;
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = draw_exponential(s, rate);
    ASSERT_GT(d, 0.0);
    sum += d;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0 / rate, 0.03 / rate);
}

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(99, Substream::Mobility, 3);
  RandomStream b(99, Substream::Mobility, 3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, SubstreamsAreIndependent) {
  RandomStream w1(5, Substream::Workload);
  std::vector<std::uint64_t> baseline;
  for (int i = 0; i < 50; ++i) baseline.push_back(w1.next_u64());

  RandomStream w2(5, Substream::Workload);
  RandomStream m(5, Substream::Mobility);
  RandomStream sel(5, Substream::MoverSelection);
  for (int i = 0; i < 50; ++i) {
    m.next_u64();
    sel.below(10);
    ASSERT_EQ(w2.next_u64(), baseline[static_cast<std::size_t>(i)]);
  }
  RandomStream w3(5, Substream::Workload);
  RandomStream m3(5, Substream::Mobility);
  EXPECT_NE(w3.next_u64(), m3.next_u64());
}

TEST(RandomStream, UniformRanges) {
  RandomStream s(11, Substream::Workload);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = s.uniform_open_closed();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_LT(s.below(7), 7u);
  }
}
