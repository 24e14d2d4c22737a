#include "meshsim/radio/phy.hpp"

#include <cmath>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

Duration airtime(std::size_t pdu_octets, const PhyMode& phy) {
  if (pdu_octets == 0) throw ConfigError("airtime of an empty PDU");
  const auto bits = static_cast<std::int64_t>((phy.frame_overhead + pdu_octets) * 8);
  const std::int64_t bits_per_us = phy.bit_rate / 1'000'000;
  return bits / bits_per_us;
}

double path_loss_db(double distance_m, const PathLossParams& params) {
  if (!(distance_m > 0.0)) {
    throw ConfigError("path loss requested for non-positive distance " + std::to_string(distance_m) + " m");
  }
  return params.reference_loss_db + 10.0 * params.exponent * std::log10(distance_m);
}

}  // namespace meshsim
