#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <vector>

#include "meshsim/radio/channel.hpp"
#include "meshsim/radio/phy.hpp"
#include "meshsim/sim/errors.hpp"
#include "meshsim/sim/kernel.hpp"

using namespace meshsim;

TEST(Phy, PathLossReferencePoints) {
  EXPECT_DOUBLE_EQ(path_loss_db(1.0), 40.0);
  EXPECT_DOUBLE_EQ(path_loss_db(10.0), 67.0);
  EXPECT_DOUBLE_EQ(path_loss_db(100.0), 94.0);
  EXPECT_THROW(path_loss_db(0.0), ConfigError);
}

TEST(Phy, Airtime) {
  EXPECT_EQ(airtime(39, kLe1M), 392);
  EXPECT_EQ(airtime(39, kLe2M), 200);
  EXPECT_EQ(airtime(1, kLe1M), 88);
  EXPECT_EQ(airtime(61, kLe2M), 288);
  EXPECT_THROW(airtime(0, kLe1M), ConfigError);
}

TEST(Reception, Rules) {
  ReceptionQuery q;
  q.rssi_dbm = -60.0;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::delivered);

  q.rssi_dbm = -91.0;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::lost_below_sensitivity);

  q.rssi_dbm = -60.0;
  std::vector<Interferer> others{{0, 100, -70.0}};
  q.overlapping = others;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::delivered);  // exactly 10 dB
  others[0].rssi_dbm = -69.5;
  q.overlapping = others;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::lost_collision);

  q.overlapping = {};
  q.receiver_transmitting = true;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::lost_not_listening);
  q.receiver_transmitting = false;
  q.tuned_throughout = false;
  EXPECT_EQ(decide_reception(q), ReceptionOutcome::lost_not_listening);
}

TEST(LinkModel, RejectsAsymmetry) {
  LinkModel m;
  m.node_count = 2;
  m.loss_db = {0, 60, 61, 0};
  EXPECT_THROW(m.validate(), ConfigError);
  m.loss_db = {0, 60, 60, 0};
  EXPECT_NO_THROW(m.validate());
  m.loss_db.pop_back();
  EXPECT_THROW(m.validate(), ConfigError);
}

namespace {

struct Recorder final : public ReceiverPort {
  std::map<std::pair<NodeId, std::uint64_t>, ReceptionOutcome> outcomes;
  bool tuned_throughout(NodeId, const ChannelFrame&) const override { return true; }
  void on_reception(NodeId node, const ChannelFrame& frame, ReceptionOutcome outcome, double) override {
    outcomes[{node, frame.id}] = outcome;
  }
};

struct PlannedFrame {
  NodeId tx;
  int channel;
  SimTime start;
};

constexpr std::size_t kOctets = 20;

// Independent statement of the reception rule over a fully known instance.
ReceptionOutcome oracle(const std::vector<PlannedFrame>& frames, std::size_t f, NodeId rx,
                        const std::vector<double>& loss, std::size_t n) {
  const Duration len = airtime(kOctets, kLe1M);
  auto rssi = [&](NodeId tx) { return 0.0 - loss[tx * n + rx]; };
  const PlannedFrame& me = frames[f];
  for (const PlannedFrame& g : frames) {
    if (g.tx == rx && g.start < me.start + len && me.start < g.start + len) return ReceptionOutcome::lost_not_listening;
  }
  if (rssi(me.tx) < -90.0) return ReceptionOutcome::lost_below_sensitivity;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const PlannedFrame& g = frames[i];
    if (i == f || g.channel != me.channel) continue;
    if (!(g.start < me.start + len && me.start < g.start + len)) continue;
    if (rssi(me.tx) - rssi(g.tx) < 10.0) return ReceptionOutcome::lost_collision;
  }
  return ReceptionOutcome::delivered;
}

}  // namespace

// Every instance with up to three nodes, at most one frame per node, start
// offsets that produce no/partial/full overlap, two channels and a loss grid
// spanning delivered, captured, colliding and inaudible links.
TEST(CollisionOracle, ExhaustiveSmallInstances) {
  const std::vector<double> loss_values{50.0, 58.0, 62.0, 95.0};
  const std::vector<SimTime> starts{0, 100, 250};
  const std::vector<int> channels{37, 38};
  std::size_t instances = 0;
  std::size_t checked = 0;

  for (std::size_t n = 2; n <= 3; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::size_t loss_combos = 1;
    for (std::size_t i = 0; i < pairs; ++i) loss_combos *= loss_values.size();
    const std::size_t options = 1 + starts.size() * channels.size();
    std::size_t plan_combos = 1;
    for (std::size_t i = 0; i < n; ++i) plan_combos *= options;

    for (std::size_t lc = 0; lc < loss_combos; ++lc) {
      std::vector<double> loss(n * n, 0.0);
      std::size_t code = lc;
      for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
          loss[a * n + b] = loss[b * n + a] = loss_values[code % loss_values.size()];
          code /= loss_values.size();
        }
      }
      for (std::size_t pc = 0; pc < plan_combos; ++pc) {
        std::vector<PlannedFrame> frames;
        std::size_t pcode = pc;
        for (NodeId t = 0; t < n; ++t) {
          const std::size_t opt = pcode % options;
          pcode /= options;
          if (opt == 0) continue;
          frames.push_back({t, channels[(opt - 1) % channels.size()], starts[(opt - 1) / channels.size()]});
        }
        if (frames.empty()) continue;
        ++instances;

        EventKernel kernel;
        LinkModel model;
        model.node_count = n;
        model.loss_db = loss;
        model.shadowing_db = 0.0;
        Recorder rec;
        RadioChannel channel(kernel, model, rec, RandomSource(1));
        std::vector<std::uint64_t> ids(frames.size(), 0);
        for (std::size_t i = 0; i < frames.size(); ++i) {
          kernel.schedule(frames[i].start, [&, i] {
            ChannelFrame fr;
            fr.transmitter = frames[i].tx;
            fr.channel = frames[i].channel;
            fr.octets = kOctets;
            fr.start = kernel.now();
            fr.end = fr.start + airtime(kOctets, kLe1M);
            ids[i] = channel.begin_transmission(fr);
          });
        }
        kernel.run(10'000);

        for (std::size_t i = 0; i < frames.size(); ++i) {
          for (NodeId rx = 0; rx < n; ++rx) {
            if (rx == frames[i].tx) continue;
            auto it = rec.outcomes.find({rx, ids[i]});
            ASSERT_NE(it, rec.outcomes.end());
            ASSERT_EQ(it->second, oracle(frames, i, rx, loss, n))
                << "n=" << n << " loss combo " << lc << " plan " << pc << " frame " << i << " rx " << rx;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_GT(instances, 10000u);
  EXPECT_GT(checked, instances);
}

TEST(Channel, HalfDuplexViolationThrows) {
  EventKernel kernel;
  LinkModel model;
  model.node_count = 2;
  model.loss_db = {0, 60, 60, 0};
  Recorder rec;
  RadioChannel channel(kernel, model, rec, RandomSource(1));
  ChannelFrame fr;
  fr.transmitter = 0;
  fr.channel = 37;
  fr.octets = 39;
  fr.start = 0;
  fr.end = 392;
  channel.begin_transmission(fr);
  fr.channel = 38;
  EXPECT_THROW(channel.begin_transmission(fr), ProtocolError);
  fr.transmitter = 1;
  fr.channel = 12;
  EXPECT_THROW(channel.begin_transmission(fr), ProtocolError);
}

TEST(Channel, LoneFrameResolvesOncePerOtherNode) {
  EventKernel kernel;
  LinkModel model;
  model.node_count = 4;
  model.loss_db.assign(16, 60.0);
  for (int i = 0; i < 4; ++i) model.loss_db[i * 4 + i] = 0.0;
  Recorder rec;
  RadioChannel channel(kernel, model, rec, RandomSource(1));
  ChannelFrame fr;
  fr.transmitter = 2;
  fr.channel = 37;
  fr.octets = 39;
  fr.end = 392;
  channel.begin_transmission(fr);
  EXPECT_EQ(channel.resolutions_scheduled(), 3u);
  kernel.run(1000);
  EXPECT_EQ(rec.outcomes.size(), 3u);
  for (const auto& [key, outcome] : rec.outcomes) EXPECT_EQ(outcome, ReceptionOutcome::delivered);
}
