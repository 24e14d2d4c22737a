#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meshsim/mesh/network.hpp"
#include "meshsim/scenario/topology.hpp"

namespace meshsim {

enum class TrafficPattern : std::uint8_t { one_to_many, many_to_one, many_to_many };

const char* to_string(TrafficPattern pattern);
const char* to_string(PublishMode mode);

/// One experiment: traffic pattern plus every protocol and radio parameter.
/// Defaults reproduce the baseline configuration (advInterval 20 ms,
/// scanInterval 2000 ms, 0 dBm, all relays, 3/2 advertising events, 11-octet
/// unicast acknowledged messages).
struct ScenarioConfig {
  std::string name;
  TrafficPattern pattern = TrafficPattern::many_to_many;
  std::size_t senders = 3;  // k for many-to-many
  PublishMode mode = PublishMode::unicast_acked;
  std::size_t message_size = 11;
  std::size_t iterations = 100;
  double period_ms = 1000.0;
  double jitter_ms = 0.0;
  bool spread_unicast = false;  // one-to-many unicast: spread per-slave sends over the period
  int controller = 0;        // node label
  std::vector<int> slaves;   // node labels; empty = every other node
  std::uint64_t seed = 1;
  double drain_ms = 5000.0;

  double adv_interval_ms = 20.0;
  double adv_delay_max_ms = 10.0;
  double adv_turnaround_us = 400.0;
  int adv_events_source = 3;
  int adv_events_relay = 2;
  std::size_t adv_relay_queue_limit = 4;

  double scan_interval_ms = 2000.0;
  double scan_window_ms = 0.0;  // 0 = equal to the interval
  double scan_retune_gap_us = 0.0;
  bool scan_random_phase = true;

  RadioParams radio;
  /// Independent per-reception drop probability applied after the radio
  /// model delivers a frame.
  double frame_loss = 0.0;
  InterferenceParams interference;

  double relay_fraction = 1.0;

  bool power_enabled = false;
  double power_zeta_th_dbm = -70.0;
  double power_c_db = 0.0;
  double power_floor_dbm = -20.0;
  std::size_t power_window = 16;

  ExtendedParams extended;

  double retry_interval_ms = 200.0;
  std::uint32_t retry_cap = 0;
  double guard_ms = 60000.0;
  int ttl = 7;
  double seg_ack_timeout_ms = 200.0;
  double reassembly_timeout_ms = 200.0;
  int seg_rounds = 4;
  std::size_t cache_size = 128;

  /// Protocol parameters in simulator units.
  MeshParams mesh_params() const;
  Duration period() const { return from_ms(period_ms); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&);
};

/// Parses a scenario document (versioned header, then `key = value` lines).
/// Absent keys keep their defaults; unknown keys, malformed values and
/// out-of-range values are all reported together with line numbers and keys.
ScenarioConfig load_scenario(std::string_view document);
ScenarioConfig load_scenario_file(const std::string& path);

/// Applies one `key=value` override. Throws ConfigError naming the key.
void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value);
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

/// Range checks on a complete configuration. Returns every violation.
std::vector<std::string> validate(const ScenarioConfig& cfg);

/// Canonical document listing every key; load_scenario(to_document(c)) == c.
std::string to_document(const ScenarioConfig& cfg);

/// Every accepted key with its value in `cfg`, in canonical order.
std::vector<std::pair<std::string, std::string>> scenario_entries(const ScenarioConfig& cfg);

}  // namespace meshsim
