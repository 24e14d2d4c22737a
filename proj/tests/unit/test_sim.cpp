#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "meshsim/sim/errors.hpp"
#include "meshsim/sim/kernel.hpp"
#include "meshsim/sim/random.hpp"

using namespace meshsim;

TEST(Kernel, DispatchesInTimeOrder) {
  EventKernel k;
  std::vector<int> order;
  k.schedule(30, [&] { order.push_back(3); });
  k.schedule(10, [&] { order.push_back(1); });
  k.schedule(20, [&] { order.push_back(2); });
  EXPECT_EQ(k.run(100), 3u);
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(k.now(), 100);
}

TEST(Kernel, TiesRunInInsertionOrder) {
  EventKernel k;
  std::vector<int> order;
  for (int i = 0; i < 50; ++i) k.schedule(5, [&order, i] { order.push_back(i); });
  k.run(5);
  ASSERT_EQ(order.size(), 50u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(order[i], i);
}

TEST(Kernel, CancelledEventsNeverFire) {
  EventKernel k;
  bool fired = false;
  EventHandle h = k.schedule(10, [&] { fired = true; });
  EXPECT_TRUE(k.cancel(h));
  EXPECT_FALSE(k.cancel(h));
  k.run(20);
  EXPECT_FALSE(fired);
  EXPECT_FALSE(k.cancel(EventHandle{}));
}

TEST(Kernel, HandlersCanScheduleAtTheCurrentInstant) {
  EventKernel k;
  std::vector<SimTime> seen;
  k.schedule(7, [&] {
    seen.push_back(k.now());
    k.schedule(k.now(), [&] { seen.push_back(k.now()); });
    k.schedule_after(3, [&] { seen.push_back(k.now()); });
  });
  k.run(100);
  EXPECT_EQ(seen, (std::vector<SimTime>{7, 7, 10}));
}

TEST(Kernel, RunStopsAtHorizonAndKeepsLaterEvents) {
  EventKernel k;
  int count = 0;
  k.schedule(10, [&] { ++count; });
  k.schedule(11, [&] { ++count; });
  k.run(10);
  EXPECT_EQ(count, 1);
  EXPECT_EQ(k.pending(), 1u);
  k.run(11);
  EXPECT_EQ(count, 2);
  EXPECT_EQ(k.dispatched_total(), 2u);
}

TEST(Kernel, RejectsEventsInThePast) {
  EventKernel k;
  k.run(50);
  EXPECT_THROW(k.schedule(49, [] {}), ConfigError);
}

TEST(Random, SameSeedSameSequence) {
  RandomSource a(42);
  RandomSource b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Random, StreamsDependOnlyOnSeedAndId) {
  RandomSource a(7);
  RandomSource b(7);
  for (int i = 0; i < 100; ++i) b.next_u64();
  RandomSource sa = a.stream(3);
  RandomSource sb = b.stream(3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(sa.next_u64(), sb.next_u64());
  EXPECT_NE(a.stream(3).seed(), a.stream(4).seed());
}

TEST(Random, UniformStaysInRange) {
  RandomSource r(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = r.uniform(-2.0, 5.0);
    ASSERT_GE(v, -2.0);
    ASSERT_LT(v, 5.0);
  }
  EXPECT_EQ(r.uniform(3.0, 3.0), 3.0);
  EXPECT_THROW(r.uniform(1.0, 0.0), ConfigError);
}

TEST(Random, IndexCoversRange) {
  RandomSource r(9);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t v = r.index(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(r.index(0), ConfigError);
}

TEST(Random, NormalMoments) {
  RandomSource r(11);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal(1.0, 4.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 1.0, 0.05);
  EXPECT_NEAR(var, 16.0, 0.3);
  EXPECT_EQ(r.normal(2.5, 0.0), 2.5);
}
