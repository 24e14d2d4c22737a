#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "meshsim/scenario/config.hpp"
#include "meshsim/scenario/topology.hpp"
#include "meshsim/scenario/traffic.hpp"
#include "meshsim/sim/errors.hpp"

using namespace meshsim;

namespace {

const std::string kData = MESHSIM_DATA_DIR;

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kSmall = R"(meshsim-topology 1
name small
floor_attenuation_db 20
node 1 0 0 0
node 2 0 10 0
node 3 1 10 0
)";

}  // namespace

TEST(Topology, ParsesCoordinates) {
  const Topology t = load_topology(kSmall);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.name(), "small");
  EXPECT_EQ(t.label(1), 2);
  EXPECT_DOUBLE_EQ(t.loss_db(0, 1), 67.0);
  EXPECT_DOUBLE_EQ(t.loss_db(1, 0), 67.0);
  EXPECT_DOUBLE_EQ(t.loss_db(1, 2), 40.0 + 27.0 * std::log10(3.0) + 20.0);
  EXPECT_DOUBLE_EQ(t.loss_db(2, 2), 0.0);
}

TEST(Topology, ParsesMatrix) {
  const Topology t = load_topology("meshsim-topology 1\nloss 3\n0 60 70\n60 0 80\n70 80 0\n");
  EXPECT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t.loss_db(0, 2), 70.0);
  const LinkModel m = t.link_model(RadioParams{});
  EXPECT_DOUBLE_EQ(m.loss(2, 1), 80.0);
}

TEST(Topology, AsymmetryNamesThePair) {
  const std::string msg =
      error_of([] { load_topology("meshsim-topology 1\nloss 3\n0 60 70\n60 0 80\n70 81 0\n"); });
  EXPECT_NE(msg.find("loss(1,2)"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
}

TEST(Topology, ReportsEveryProblem) {
  const std::string msg = error_of([] {
    load_topology("meshsim-topology 1\nnode 1 0 0 0\nnode 1 0 5 0\nbogus 3\nnode 4 0 x 0\n");
  });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
}

TEST(Topology, RejectsBadDocuments) {
  EXPECT_THROW(load_topology("node 1 0 0 0\nnode 2 0 1 0\n"), ConfigError);
  EXPECT_THROW(load_topology("meshsim-topology 1\nnode 1 0 0 0\n"), ConfigError);
  EXPECT_THROW(load_topology("meshsim-topology 1\nnode 1 0 0 0\nnode 2 0 0 0\n"), ConfigError);
  EXPECT_THROW(load_topology("meshsim-topology 1\nloss 2\n5 60\n60 0\n"), ConfigError);
  EXPECT_THROW(load_topology("meshsim-topology 1\nloss 2\n0 60\n"), ConfigError);
  EXPECT_THROW(load_topology("meshsim-topology 1\nnode 1 0 0 0\nloss 2\n0 60\n60 0\n"), ConfigError);
  EXPECT_THROW(load_topology_file(kData + "/topologies/missing.topo"), ConfigError);
}

TEST(Topology, BundledTestbedIsMultiHopAndConnected) {
  const Topology t = load_topology_file(kData + "/topologies/testbed20.topo");
  ASSERT_EQ(t.size(), 20u);
  const auto hops = hop_matrix(t, RadioParams{});
  std::size_t diameter = 0;
  for (const auto& row : hops) {
    for (const auto& h : row) {
      ASSERT_TRUE(h.has_value());
      diameter = std::max(diameter, *h);
    }
  }
  EXPECT_EQ(diameter, 4u);
  EXPECT_EQ(hop_distance(t, RadioParams{}, 0, 19), 4u);
  EXPECT_EQ(hop_distance(t, RadioParams{}, 9, 4), 1u);
  const auto adj = connectivity(t, RadioParams{});
  for (NodeId n : {4u, 5u, 6u, 7u, 8u, 12u, 13u}) {
    EXPECT_NE(std::find(adj[9].begin(), adj[9].end(), n), adj[9].end()) << n;
  }
}

TEST(Topology, HopMatrixRespectsRelayMask) {
  const Topology t = load_topology("meshsim-topology 1\nloss 3\n0 60 200\n60 0 60\n200 60 0\n");
  EXPECT_EQ(hop_matrix(t, RadioParams{})[0][2], 2u);
  EXPECT_EQ(hop_matrix(t, RadioParams{}, {true, false, true})[0][2], std::nullopt);
}

TEST(Scenario, Defaults) {
  const ScenarioConfig c;
  EXPECT_EQ(c.adv_interval_ms, 20.0);
  EXPECT_EQ(c.scan_interval_ms, 2000.0);
  EXPECT_EQ(c.radio.tx_power_dbm, 0.0);
  EXPECT_EQ(c.relay_fraction, 1.0);
  EXPECT_EQ(c.adv_events_source, 3);
  EXPECT_EQ(c.adv_events_relay, 2);
  EXPECT_EQ(c.message_size, 11u);
  EXPECT_EQ(c.mode, PublishMode::unicast_acked);
  EXPECT_TRUE(validate(c).empty());
  const MeshParams p = c.mesh_params();
  EXPECT_EQ(p.scan.window, p.scan.interval);
}

TEST(Scenario, ParsesAndOverrides) {
  ScenarioConfig c = load_scenario("meshsim-scenario 1\n# comment\nscan.interval_ms = 1000\nadv.interval_ms = 10\n");
  EXPECT_EQ(c.scan_interval_ms, 1000.0);
  EXPECT_EQ(c.adv_interval_ms, 10.0);
  EXPECT_TRUE(validate(c).empty());
  apply_override(c, "senders=7");
  EXPECT_EQ(c.senders, 7u);
  apply_override(c, "mode", "group-acked-fixed");
  EXPECT_FALSE(validate(c).empty());
  EXPECT_THROW(apply_override(c, "nonsense=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "senders=seven"), ConfigError);
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  const std::string unknown = error_of([] { load_scenario("meshsim-scenario 1\n\nfoo = 1\n"); });
  EXPECT_NE(unknown.find("line 3"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("foo"), std::string::npos) << unknown;
  const std::string dup = error_of([] { load_scenario("meshsim-scenario 1\nsenders = 3\nsenders = 4\n"); });
  EXPECT_NE(dup.find("line 3"), std::string::npos) << dup;
  EXPECT_THROW(load_scenario("senders = 3\n"), ConfigError);
  EXPECT_THROW(load_scenario("meshsim-scenario 1\nrelay.fraction = 0\n"), ConfigError);
  EXPECT_THROW(load_scenario("meshsim-scenario 1\nmessage_size = 381\n"), ConfigError);
}

TEST(Scenario, DocumentRoundTrip) {
  ScenarioConfig c;
  c.name = "rt";
  c.senders = 7;
  c.period_ms = 1234.5;
  c.frame_loss = 0.125;
  c.power_enabled = true;
  c.power_c_db = -20.0;
  c.slaves = {1, 2, 3};
  c.relay_fraction = 0.1;
  const ScenarioConfig back = load_scenario(to_document(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(to_document(back), to_document(c));
}

TEST(Scenario, BundledScenariosLoad) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kData + "/scenarios")) {
    if (entry.path().extension() != ".scn") continue;
    const ScenarioConfig c = load_scenario_file(entry.path().string());
    EXPECT_TRUE(validate(c).empty()) << entry.path();
    EXPECT_EQ(c.name, entry.path().stem().string());
    ++count;
  }
  EXPECT_GE(count, 15u);
}

TEST(Traffic, OneToManyUnicastCount) {
  const Topology t = load_topology_file(kData + "/topologies/testbed20.topo");
  ScenarioConfig c;
  c.pattern = TrafficPattern::one_to_many;
  c.slaves = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  RandomSource rng(1);
  const TrafficSchedule s = build_traffic(t, c, rng);
  ASSERT_EQ(s.entries.size(), 1400u);
  for (std::size_t i = 0; i < 14; ++i) {
    EXPECT_EQ(s.entries[i].send_time, 0);
    EXPECT_EQ(s.entries[i].app_msg_id, i + 1);
  }
  c.spread_unicast = true;
  RandomSource rng2(1);
  const TrafficSchedule spread = build_traffic(t, c, rng2);
  EXPECT_EQ(spread.entries[7].send_time, from_ms(500.0));
}

TEST(Traffic, GroupSendsOnePerIteration) {
  const Topology t = load_topology_file(kData + "/topologies/testbed20.topo");
  ScenarioConfig c;
  c.pattern = TrafficPattern::one_to_many;
  c.mode = PublishMode::group_acked_fixed;
  c.slaves = {4, 5, 6};
  RandomSource rng(1);
  const TrafficSchedule s = build_traffic(t, c, rng);
  ASSERT_EQ(s.entries.size(), 100u);
  EXPECT_TRUE(s.entries[0].destination.is_group());
  EXPECT_EQ(s.entries[0].recipients.size(), 3u);
}

TEST(Traffic, ManyToManyPairsAreDisjointAndMultiHop) {
  const Topology t = load_topology_file(kData + "/topologies/testbed20.topo");
  const auto hops = hop_matrix(t, RadioParams{});
  for (std::size_t k : {3u, 7u}) {
    ScenarioConfig c;
    c.senders = k;
    RandomSource rng(5);
    const TrafficSchedule s = build_traffic(t, c, rng);
    ASSERT_EQ(s.entries.size(), 100 * k);
    for (std::size_t it = 0; it < 100; ++it) {
      std::set<NodeId> used;
      for (std::size_t j = 0; j < k; ++j) {
        const TrafficEntry& e = s.entries[it * k + j];
        EXPECT_EQ(e.send_time, static_cast<SimTime>(it) * milliseconds(1000));
        const NodeId dst = e.destination.node();
        EXPECT_GE(*hops[e.source][dst], 2u);
        EXPECT_TRUE(used.insert(e.source).second);
        EXPECT_TRUE(used.insert(dst).second);
      }
    }
  }
  ScenarioConfig too_many;
  too_many.senders = 11;
  RandomSource rng(1);
  EXPECT_THROW(build_traffic(t, too_many, rng), ConfigError);
}
