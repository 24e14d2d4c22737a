#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/scenario/config.hpp"
#include "meshsim/scenario/topology.hpp"
#include "meshsim/sim/random.hpp"
#include "meshsim/sim/time.hpp"

namespace meshsim {

enum class MessageOutcome : std::uint8_t { delivered, lost, guard_flagged };

const char* to_string(MessageOutcome outcome);

/// One (message, destination) pair. Group messages produce one record per
/// subscribed slave, all sharing app_msg_id.
struct MessageRecord {
  AppMsgId app_msg_id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  SimTime send_time = 0;
  std::optional<SimTime> first_delivery;
  std::optional<SimTime> ack_time;  // status from `destination` back at `source`
  std::uint64_t retransmissions = 0;
  std::uint64_t frames = 0;  // every frame carrying this message's PDUs, network-wide
  MessageOutcome outcome = MessageOutcome::lost;

  friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

struct RunStats {
  std::uint64_t frames = 0;
  std::uint64_t mesh_frames = 0;
  double mean_tx_power_dbm = 0.0;
  std::uint64_t relayed_pdus = 0;
  std::uint64_t originated_pdus = 0;
  std::uint64_t anomalies = 0;
  std::uint64_t events = 0;
  SimTime end_time = 0;
  std::array<std::uint64_t, 4> receptions{};  // by ReceptionOutcome
};

struct RunResult {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<bool> relay_mask;
  std::vector<MessageRecord> records;
  RunStats stats;
};

/// Random streams derived from the run seed.
inline constexpr std::uint64_t kTrafficStream = 1;
inline constexpr std::uint64_t kRelayStream = 2;
inline constexpr std::uint64_t kLossStream = 3;

/// Picks the relay set for `fraction` < 1, redrawing (bounded) until every
/// node pair is connected through relays. All nodes relay when fraction is 1.
std::vector<bool> choose_relays(const Topology& topology, const ScenarioConfig& cfg, RandomSource& rng);

/// Builds the network, schedules the traffic and runs until every send has
/// happened, then for run.drain_ms longer, then until no publication is
/// pending (bounded by the per-message guard).
RunResult run_experiment(const Topology& topology, const ScenarioConfig& cfg, std::uint64_t seed);

/// run_experiment for each seed, in order.
std::vector<RunResult> run_seeds(const Topology& topology, const ScenarioConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds);

}  // namespace meshsim
