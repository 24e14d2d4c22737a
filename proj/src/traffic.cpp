#include "meshsim/scenario/traffic.hpp"

#include <algorithm>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {

constexpr int kMaxPairingAttempts = 1000;

NodeId index_of(const Topology& topology, int label, const char* role) {
  for (NodeId i = 0; i < topology.size(); ++i) {
    if (topology.label(i) == label) return i;
  }
  throw ConfigError(std::string(role) + " " + std::to_string(label) + " is not in the topology");
}

Duration jitter(const ScenarioConfig& cfg, RandomSource& rng) {
  return cfg.jitter_ms > 0.0 ? from_ms(rng.uniform(0.0, cfg.jitter_ms)) : 0;
}

}  // namespace

Participants resolve_participants(const Topology& topology, const ScenarioConfig& cfg) {
  Participants p;
  p.controller = index_of(topology, cfg.controller, "controller");
  if (cfg.slaves.empty()) {
    for (NodeId i = 0; i < topology.size(); ++i) {
      if (i != p.controller) p.slaves.push_back(i);
    }
    return p;
  }
  for (int label : cfg.slaves) {
    const NodeId id = index_of(topology, label, "slave");
    if (id == p.controller) throw ConfigError("controller " + std::to_string(label) + " listed as a slave");
    if (std::find(p.slaves.begin(), p.slaves.end(), id) != p.slaves.end()) {
      throw ConfigError("slave " + std::to_string(label) + " listed twice");
    }
    p.slaves.push_back(id);
  }
  return p;
}

TrafficSchedule build_traffic(const Topology& topology, const ScenarioConfig& cfg, RandomSource& rng,
                              const std::vector<bool>& relay_mask) {
  if (auto problems = validate(cfg); !problems.empty()) throw ConfigError("invalid scenario: " + problems.front());
  TrafficSchedule schedule;
  const Duration period = cfg.period();

  if (cfg.pattern != TrafficPattern::many_to_many) {
    const Participants parts = resolve_participants(topology, cfg);
    if (parts.slaves.empty()) throw ConfigError("one-to-many traffic needs at least one slave");
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
      const SimTime base = static_cast<SimTime>(it) * period;
      if (cfg.mode == PublishMode::group_acked_fixed) {
        TrafficEntry e;
        e.send_time = base + jitter(cfg, rng);
        e.source = parts.controller;
        e.destination = MeshAddress::group(kSlaveGroup);
        e.payload_size = cfg.message_size;
        e.recipients = parts.slaves;
        schedule.entries.push_back(std::move(e));
        continue;
      }
      const auto n = static_cast<Duration>(parts.slaves.size());
      for (std::size_t s = 0; s < parts.slaves.size(); ++s) {
        TrafficEntry e;
        e.send_time = base + (cfg.spread_unicast ? period * static_cast<Duration>(s) / n : 0) + jitter(cfg, rng);
        e.source = parts.controller;
        e.destination = MeshAddress::of_node(parts.slaves[s]);
        e.payload_size = cfg.message_size;
        e.recipients = {parts.slaves[s]};
        schedule.entries.push_back(std::move(e));
      }
    }
  } else {
    const auto hops = hop_matrix(topology, cfg.radio, relay_mask);
    std::vector<std::pair<NodeId, NodeId>> eligible;
    for (NodeId a = 0; a < topology.size(); ++a) {
      for (NodeId b = 0; b < topology.size(); ++b) {
        if (a != b && hops[a][b] && *hops[a][b] >= 2) eligible.emplace_back(a, b);
      }
    }
    if (eligible.empty()) throw ConfigError("many-to-many: no source/destination pair is at least two hops apart");
    if (2 * cfg.senders > topology.size()) {
      throw ConfigError("many-to-many(" + std::to_string(cfg.senders) + ") needs at least " +
                        std::to_string(2 * cfg.senders) + " nodes");
    }
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
      const SimTime base = static_cast<SimTime>(it) * period;
      std::vector<std::pair<NodeId, NodeId>> chosen;
      for (int attempt = 0; chosen.size() < cfg.senders; ++attempt) {
        if (attempt >= kMaxPairingAttempts) {
          throw ConfigError("many-to-many(" + std::to_string(cfg.senders) + "): no disjoint pairing of two-hop pairs found");
        }
        chosen.clear();
        std::vector<bool> used(topology.size(), false);
        while (chosen.size() < cfg.senders) {
          std::vector<std::size_t> open;
          for (std::size_t i = 0; i < eligible.size(); ++i) {
            if (!used[eligible[i].first] && !used[eligible[i].second]) open.push_back(i);
          }
          if (open.empty()) break;
          const auto& pick = eligible[open[rng.index(open.size())]];
          used[pick.first] = used[pick.second] = true;
          chosen.push_back(pick);
        }
      }
      for (const auto& [src, dst] : chosen) {
        TrafficEntry e;
        e.send_time = base + jitter(cfg, rng);
        e.source = src;
        e.destination = MeshAddress::of_node(dst);
        e.payload_size = cfg.message_size;
        e.recipients = {dst};
        schedule.entries.push_back(std::move(e));
      }
    }
  }

  std::stable_sort(schedule.entries.begin(), schedule.entries.end(),
                   [](const TrafficEntry& a, const TrafficEntry& b) { return a.send_time < b.send_time; });
  AppMsgId next = 1;
  for (TrafficEntry& e : schedule.entries) e.app_msg_id = next++;
  return schedule;
}

}  // namespace meshsim
