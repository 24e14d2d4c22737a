#include <gtest/gtest.h>

#include <numeric>

#include "meshsim/opt/extended.hpp"
#include "meshsim/opt/power_control.hpp"
#include "meshsim/opt/relay_selection.hpp"
#include "meshsim/radio/phy.hpp"
#include "meshsim/sim/errors.hpp"
#include "meshsim/sim/random.hpp"

using namespace meshsim;

namespace {

RssiObservation all_channels(double rssi) {
  RssiObservation o;
  for (int ch : kPrimaryChannels) o.observe(ch, rssi);
  return o;
}

}  // namespace

TEST(PowerControl, DbTranscription) {
  PowerControlConfig cfg;
  cfg.p_max_dbm = 0.0;
  cfg.zeta_th_dbm = -70.0;
  cfg.c_db = 0.0;
  EXPECT_DOUBLE_EQ(power_control(cfg, all_channels(-60.0)), -10.0);
  cfg.c_db = -3.0;
  EXPECT_DOUBLE_EQ(power_control(cfg, all_channels(-60.0)), -13.0);
}

TEST(PowerControl, Clamps) {
  PowerControlConfig cfg;
  EXPECT_DOUBLE_EQ(power_control(cfg, all_channels(-80.0)), 0.0);
  EXPECT_DOUBLE_EQ(power_control(cfg, all_channels(-30.0)), -20.0);
}

TEST(PowerControl, GateNeedsAllChannels) {
  PowerControlConfig cfg;
  RssiObservation o;
  o.observe(37, -50.0);
  o.observe(38, -50.0);
  EXPECT_FALSE(o.all_channels_observed());
  EXPECT_DOUBLE_EQ(power_control(cfg, o), cfg.p_max_dbm);
  o.observe(39, -50.0);
  EXPECT_TRUE(o.all_channels_observed());
  EXPECT_DOUBLE_EQ(power_control(cfg, o), -20.0);
  EXPECT_DOUBLE_EQ(power_control(cfg, RssiObservation{}), cfg.p_max_dbm);
}

TEST(PowerControl, UsesWeakestChannel) {
  PowerControlConfig cfg;
  RssiObservation o;
  o.observe(37, -50.0);
  o.observe(38, -65.0);
  o.observe(39, -55.0);
  EXPECT_DOUBLE_EQ(power_control(cfg, o), -5.0);
}

TEST(RssiWindow, MinimumAndEviction) {
  RssiObservation o(16);
  o.observe(37, -60.0);
  o.observe(37, -70.0);
  o.observe(37, -65.0);
  EXPECT_EQ(o.minimum(37), -70.0);
  EXPECT_EQ(o.minimum(38), std::nullopt);
  o.observe(12, -99.0);
  EXPECT_EQ(o.samples(37), 3u);

  RssiObservation w(16);
  w.observe(38, -90.0);
  for (int i = 0; i < 15; ++i) w.observe(38, -50.0);
  EXPECT_EQ(w.minimum(38), -90.0);
  w.observe(38, -50.0);
  EXPECT_EQ(w.minimum(38), -50.0);
  EXPECT_EQ(w.samples(38), 16u);
}

TEST(PowerControl, ConfigValidation) {
  PowerControlConfig cfg;
  EXPECT_NO_THROW(cfg.validate(-90.0));
  cfg.p_floor_dbm = 5.0;
  EXPECT_THROW(cfg.validate(-90.0), ConfigError);
  cfg.p_floor_dbm = -20.0;
  cfg.zeta_th_dbm = -95.0;
  EXPECT_THROW(cfg.validate(-90.0), ConfigError);
  cfg.zeta_th_dbm = -70.0;
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(-90.0), ConfigError);
}

TEST(Relays, Counts) {
  EXPECT_EQ(relay_count(20, 1.0), 20u);
  EXPECT_EQ(relay_count(20, 0.5), 10u);
  EXPECT_EQ(relay_count(20, 0.25), 5u);
  EXPECT_EQ(relay_count(7, 0.5), 4u);
  EXPECT_EQ(relay_count(3, 0.1), 1u);
}

// The number of selected relays is a function of (N, fraction) alone: it never
// moves with the random stream.
TEST(Relays, CountStableAcrossSeeds) {
  std::vector<NodeId> nodes(20);
  std::iota(nodes.begin(), nodes.end(), 0);
  for (double fraction : {0.25, 0.5, 0.75, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      RandomSource rng(seed);
      const auto mask = select_relays(nodes, fraction, rng);
      ASSERT_EQ(mask.size(), nodes.size());
      ASSERT_EQ(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)), relay_count(20, fraction));
    }
  }
  RandomSource rng(1);
  EXPECT_THROW(select_relays(nodes, 0.0, rng), ConfigError);
  EXPECT_THROW(select_relays(nodes, 1.5, rng), ConfigError);
}

TEST(Relays, SelectionIsUniform) {
  std::vector<NodeId> nodes(8);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<int> hits(8, 0);
  RandomSource rng(3);
  const int draws = 8000;
  for (int i = 0; i < draws; ++i) {
    const auto mask = select_relays(nodes, 0.25, rng);
    for (std::size_t j = 0; j < 8; ++j) hits[j] += mask[j];
  }
  for (int h : hits) EXPECT_NEAR(h, draws / 4, 200);
}

TEST(Extended, PrimaryAirtimeArithmetic) {
  ExtendedParams ext;
  EXPECT_EQ(legacy_event_primary_airtime(39), 3 * 392);
  EXPECT_EQ(extended_event_primary_airtime(ext), 3 * 160);
  ext.enabled = false;
  // 50 octets legacy: four full 39-octet segment PDUs and a 29-octet tail
  const Duration legacy = primary_airtime_per_message(50, 3, ext);
  EXPECT_EQ(legacy, 3 * 3 * (4 * 392 + 312));
  ext.enabled = true;
  const Duration extended = primary_airtime_per_message(50, 3, ext);
  EXPECT_EQ(extended, 3 * 3 * 160);
  EXPECT_LT(extended, legacy);
  EXPECT_EQ(airtime(50, kLe2M), 244);
}
