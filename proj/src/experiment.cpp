#include "meshsim/harness/experiment.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "meshsim/mesh/network.hpp"
#include "meshsim/opt/relay_selection.hpp"
#include "meshsim/scenario/traffic.hpp"
#include "meshsim/sim/errors.hpp"
#include "meshsim/sim/kernel.hpp"

namespace meshsim {

namespace {

constexpr int kRelayDrawAttempts = 200;

class Ledger final : public NetworkObserver {
 public:
  explicit Ledger(std::vector<MessageRecord>& records) : records_(records) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      by_id_[records_[i].app_msg_id].push_back(i);
    }
  }

  void on_frame(const ChannelFrame& frame) override {
    if (frame.pdu && frame.pdu->app_msg_id != 0) ++frames_[frame.pdu->app_msg_id];
  }

  void on_command_delivered(NodeId node, AppMsgId id, SimTime at) override {
    if (MessageRecord* r = find(id, node); r && !r->first_delivery) r->first_delivery = at;
  }

  void on_status_received(NodeId node, NodeId from, AppMsgId id, SimTime at) override {
    MessageRecord* r = find(id, from);
    if (r && r->source == node && !r->ack_time) r->ack_time = at;
  }

  void on_retransmission(AppMsgId id, std::size_t count) override { retransmissions_[id] += count; }

  void on_publication_abandoned(AppMsgId id, AbandonReason why, SimTime) override {
    if (why == AbandonReason::guard) guarded_.insert(id);
  }

  void on_anomaly(NodeId, std::string_view) override { ++anomalies_; }

  void finish(const MeshNetwork& network) {
    for (MessageRecord& r : records_) {
      r.frames = frames_[r.app_msg_id];
      r.retransmissions = retransmissions_[r.app_msg_id];
      const bool pending = network.publication_pending(r.source, r.app_msg_id);
      if (guarded_.count(r.app_msg_id) || pending) {
        r.outcome = MessageOutcome::guard_flagged;
      } else {
        r.outcome = r.first_delivery ? MessageOutcome::delivered : MessageOutcome::lost;
      }
    }
  }

  std::uint64_t anomalies() const { return anomalies_; }

 private:
  MessageRecord* find(AppMsgId id, NodeId destination) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return nullptr;
    for (std::size_t i : it->second) {
      if (records_[i].destination == destination) return &records_[i];
    }
    return nullptr;
  }

  std::vector<MessageRecord>& records_;
  std::unordered_map<AppMsgId, std::vector<std::size_t>> by_id_;
  std::unordered_map<AppMsgId, std::uint64_t> frames_;
  std::unordered_map<AppMsgId, std::uint64_t> retransmissions_;
  std::unordered_set<AppMsgId> guarded_;
  std::uint64_t anomalies_ = 0;
};

std::size_t reachable_pairs(const Topology& topology, const RadioParams& radio, const std::vector<bool>& mask) {
  std::size_t count = 0;
  for (const auto& row : hop_matrix(topology, radio, mask)) {
    for (const auto& h : row) count += h.has_value();
  }
  return count;
}

}  // namespace

const char* to_string(MessageOutcome outcome) {
  switch (outcome) {
    case MessageOutcome::delivered: return "delivered";
    case MessageOutcome::lost: return "lost";
    case MessageOutcome::guard_flagged: return "guard_flagged";
  }
  return "?";
}

std::vector<bool> choose_relays(const Topology& topology, const ScenarioConfig& cfg, RandomSource& rng) {
  const std::size_t n = topology.size();
  if (cfg.relay_fraction >= 1.0) return std::vector<bool>(n, true);
  std::vector<NodeId> nodes(n);
  for (NodeId i = 0; i < n; ++i) nodes[i] = i;
  const std::size_t full = n * n;
  std::vector<bool> best;
  std::size_t best_pairs = 0;
  for (int attempt = 0; attempt < kRelayDrawAttempts; ++attempt) {
    std::vector<bool> mask = select_relays(nodes, cfg.relay_fraction, rng);
    const std::size_t pairs = reachable_pairs(topology, cfg.radio, mask);
    if (pairs > best_pairs || best.empty()) {
      best = std::move(mask);
      best_pairs = pairs;
    }
    if (best_pairs == full) break;
  }
  return best;
}

RunResult run_experiment(const Topology& topology, const ScenarioConfig& cfg, std::uint64_t seed) {
  if (auto problems = validate(cfg); !problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  RunResult result;
  result.config = cfg;
  result.config.seed = seed;
  result.seed = seed;

  const RandomSource root(seed);
  RandomSource relay_rng = root.stream(kRelayStream);
  result.relay_mask = choose_relays(topology, cfg, relay_rng);
  RandomSource traffic_rng = root.stream(kTrafficStream);
  const TrafficSchedule schedule = build_traffic(topology, cfg, traffic_rng, result.relay_mask);

  for (const TrafficEntry& e : schedule.entries) {
    for (NodeId dst : e.recipients) {
      MessageRecord r;
      r.app_msg_id = e.app_msg_id;
      r.source = e.source;
      r.destination = dst;
      r.send_time = e.send_time;
      result.records.push_back(r);
    }
  }

  std::vector<NodeConfig> nodes(topology.size());
  const bool has_slaves = cfg.pattern != TrafficPattern::many_to_many;
  const Participants parts = has_slaves ? resolve_participants(topology, cfg) : Participants{};
  for (NodeId i = 0; i < nodes.size(); ++i) {
    NodeConfig& n = nodes[i];
    n.relay_enabled = result.relay_mask[i];
    n.tx_power_dbm = cfg.radio.tx_power_dbm;
    n.n_adv_events_source = cfg.adv_events_source;
    n.n_adv_events_relay = cfg.adv_events_relay;
  }
  if (has_slaves) {
    nodes[parts.controller].controller = true;
    for (NodeId s : parts.slaves) {
      nodes[s].slave = true;
      nodes[s].subscriptions.push_back(kSlaveGroup);
    }
  }

  EventKernel kernel;
  Ledger ledger(result.records);
  MeshNetwork network(kernel, topology.link_model(cfg.radio), cfg.mesh_params(), std::move(nodes), root, &ledger);
  if (cfg.frame_loss > 0.0) {
    auto loss_rng = std::make_shared<RandomSource>(root.stream(kLossStream));
    const double p = cfg.frame_loss;
    network.set_loss_script([loss_rng, p](const ChannelFrame&, NodeId, SimTime) { return loss_rng->uniform(0.0, 1.0) < p; });
  }

  SimTime last_send = 0;
  for (const TrafficEntry& e : schedule.entries) {
    last_send = std::max(last_send, e.send_time);
    kernel.schedule(e.send_time, [&network, &e, &cfg] {
      std::vector<std::uint8_t> payload(e.payload_size, static_cast<std::uint8_t>(e.app_msg_id & 0xFF));
      network.publish(e.source, e.destination, std::move(payload), cfg.mode, e.app_msg_id);
    });
  }

  const Duration drain = from_ms(cfg.drain_ms);
  const SimTime hard_stop = last_send + from_ms(cfg.guard_ms) + drain + from_ms(cfg.retry_interval_ms);
  kernel.run(last_send + drain);
  while (network.pending_publications() > 0 && kernel.now() < hard_stop) {
    kernel.run(std::min(hard_stop, kernel.now() + milliseconds(100)));
  }
  ledger.finish(network);

  RunStats& s = result.stats;
  const ChannelStats& cs = network.channel().stats();
  s.frames = cs.frames;
  s.mesh_frames = cs.mesh_frames;
  s.mean_tx_power_dbm = cs.mesh_frames ? cs.tx_power_sum_dbm / static_cast<double>(cs.mesh_frames) : 0.0;
  s.receptions = cs.outcomes;
  for (NodeId i = 0; i < network.size(); ++i) {
    s.relayed_pdus += network.node(i).relayed_pdus;
    s.originated_pdus += network.node(i).originated_pdus;
  }
  s.anomalies = ledger.anomalies();
  s.events = kernel.dispatched_total();
  s.end_time = kernel.now();
  return result;
}

std::vector<RunResult> run_seeds(const Topology& topology, const ScenarioConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<RunResult> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) out.push_back(run_experiment(topology, cfg, seed));
  return out;
}

}  // namespace meshsim
