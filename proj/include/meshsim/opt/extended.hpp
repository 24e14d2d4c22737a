#pragma once

#include <cstddef>

#include "meshsim/radio/phy.hpp"
#include "meshsim/sim/time.hpp"

namespace meshsim {

/// Extended advertising: a short indication on each primary channel pointing
/// to one auxiliary frame on a randomly chosen secondary channel.
struct ExtendedParams {
  bool enabled = false;
  Duration aux_offset = 1000;  // last indication end -> aux frame start, us
  std::size_t indication_octets = 10;
  PhyMode aux_phy = kLe2M;
  /// Largest access payload sent unsegmented when extended mode is on.
  std::size_t max_unsegmented = 200;
};

/// Primary-channel airtime one advertising event spends on a legacy PDU of
/// `pdu_octets` octets (three 1M frames).
Duration legacy_event_primary_airtime(std::size_t pdu_octets);

/// Primary-channel airtime of one extended advertising event (three
/// indications), independent of payload size.
Duration extended_event_primary_airtime(const ExtendedParams& params);

/// Primary airtime for delivering an access payload of `payload_octets` from
/// its source over `events` advertising events, including all segments.
Duration primary_airtime_per_message(std::size_t payload_octets, int events, const ExtendedParams& params);

}  // namespace meshsim
