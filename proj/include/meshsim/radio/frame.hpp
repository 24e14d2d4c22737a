#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/radio/phy.hpp"
#include "meshsim/sim/time.hpp"

namespace meshsim {

inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

enum class FrameKind : std::uint8_t {
  legacy_adv,      // full mesh PDU on a primary channel
  ext_indication,  // short pointer PDU on a primary channel
  aux_data,        // full mesh PDU on a secondary channel
  background,      // foreign traffic (Wi-Fi, other BLE), no payload
};

/// Pointer carried by an extended-advertising indication.
struct ExtAdvIndication {
  int aux_channel = 0;
  Duration aux_offset = 0;  // from the end of this indication to the aux frame start
  PhyMode aux_phy = kLe2M;
  std::size_t size_octets = 10;
  std::uint64_t aux_key = 0;  // identifies the auxiliary frame this points to
};

struct ChannelFrame {
  std::uint64_t id = 0;  // assigned by the channel
  NodeId transmitter = kNoNode;
  int channel = 37;
  PhyMode phy = kLe1M;
  double power_dbm = 0.0;
  SimTime start = 0;
  SimTime end = 0;
  FrameKind kind = FrameKind::legacy_adv;
  std::size_t octets = 0;
  std::shared_ptr<const MeshPdu> pdu;  // also set on indications, for accounting
  std::optional<ExtAdvIndication> indication;
  std::uint64_t aux_key = 0;  // aux frames: key shared with their indications
};

}  // namespace meshsim
