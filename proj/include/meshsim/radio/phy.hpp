#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "meshsim/sim/time.hpp"

namespace meshsim {

enum class PhyKind : std::uint8_t { uncoded_1m, uncoded_2m };

struct PhyMode {
  PhyKind kind;
  std::int64_t bit_rate;       // bits per second
  std::size_t frame_overhead;  // preamble + access address + header + CRC, octets
  std::string_view name;

  friend bool operator==(const PhyMode& a, const PhyMode& b) { return a.kind == b.kind; }
};

inline constexpr PhyMode kLe1M{PhyKind::uncoded_1m, 1'000'000, 10, "uncoded-1M"};
inline constexpr PhyMode kLe2M{PhyKind::uncoded_2m, 2'000'000, 11, "uncoded-2M"};

/// (overhead + octets) * 8 / bit_rate, in microseconds. Throws ConfigError for
/// zero octets.
Duration airtime(std::size_t pdu_octets, const PhyMode& phy);

struct PathLossParams {
  double reference_loss_db = 40.0;  // at 1 m
  double exponent = 2.7;
};

/// Log-distance path loss. Throws ConfigError for non-positive distance.
double path_loss_db(double distance_m, const PathLossParams& params = {});

inline double received_power_dbm(double tx_power_dbm, double loss_db, double shadow_db) {
  return tx_power_dbm - loss_db + shadow_db;
}

inline constexpr int kFirstPrimaryChannel = 37;
inline constexpr int kPrimaryChannels[3] = {37, 38, 39};
inline constexpr int kSecondaryChannelCount = 37;  // 0..36

inline bool is_primary_channel(int channel) { return channel >= 37 && channel <= 39; }
inline bool is_secondary_channel(int channel) { return channel >= 0 && channel <= 36; }

}  // namespace meshsim
