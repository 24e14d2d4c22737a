#pragma once

#include <cstddef>
#include <vector>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/scenario/config.hpp"
#include "meshsim/scenario/topology.hpp"
#include "meshsim/sim/random.hpp"
#include "meshsim/sim/time.hpp"

namespace meshsim {

inline constexpr std::uint16_t kSlaveGroup = kGroupAddressBase;

struct TrafficEntry {
  SimTime send_time = 0;
  NodeId source = 0;
  MeshAddress destination;
  std::size_t payload_size = 0;
  AppMsgId app_msg_id = 0;
  std::vector<NodeId> recipients;  // nodes expected to deliver the message
};

struct TrafficSchedule {
  std::vector<TrafficEntry> entries;  // non-decreasing send_time
};

/// Resolves the scenario's controller and slave labels to node indices.
struct Participants {
  NodeId controller = 0;
  std::vector<NodeId> slaves;
};
Participants resolve_participants(const Topology& topology, const ScenarioConfig& cfg);

/// Builds the send schedule.
///
/// one-to-many / many-to-one: unicast mode sends one command per slave per
/// iteration, all at the iteration start (spread evenly over the period with
/// spread_unicast); group mode sends one group command per iteration.
/// many-to-many(k): each iteration draws k disjoint
/// (source, destination) pairs uniformly among pairs at least two hops apart
/// (and reachable through relay_mask relays), all sent at the iteration start
/// plus optional jitter. Throws ConfigError when no feasible pairing exists.
TrafficSchedule build_traffic(const Topology& topology, const ScenarioConfig& cfg, RandomSource& rng,
                              const std::vector<bool>& relay_mask = {});

}  // namespace meshsim
