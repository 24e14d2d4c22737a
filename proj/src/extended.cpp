#include "meshsim/opt/extended.hpp"

#include <vector>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/mesh/segmentation.hpp"

namespace meshsim {

Duration legacy_event_primary_airtime(std::size_t pdu_octets) { return 3 * airtime(pdu_octets, kLe1M); }

Duration extended_event_primary_airtime(const ExtendedParams& params) {
  return 3 * airtime(params.indication_octets, kLe1M);
}

Duration primary_airtime_per_message(std::size_t payload_octets, int events, const ExtendedParams& params) {
  if (params.enabled) {
    const std::size_t pdus = segment_count(payload_octets, params.max_unsegmented);
    return static_cast<Duration>(pdus) * events * extended_event_primary_airtime(params);
  }
  const std::vector<std::uint8_t> payload(payload_octets, 0);
  Duration total = 0;
  for (const MeshPdu& pdu : segment_message(payload, MeshPdu{})) {
    total += events * legacy_event_primary_airtime(legacy_pdu_octets(pdu));
  }
  return total;
}

}  // namespace meshsim
