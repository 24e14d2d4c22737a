#include "meshsim/mesh/pdu.hpp"

#include <algorithm>

namespace meshsim {

namespace {
// adv header (2) + AdvA (6) + AD length/type (2)
constexpr std::size_t kAdvFraming = 10;
// IVI/NID, CTL/TTL, SEQ (3), SRC (2), DST (2)
constexpr std::size_t kNetworkHeader = 9;
constexpr std::size_t kNetMicAccess = 4;
constexpr std::size_t kNetMicControl = 8;
constexpr std::size_t kTransMic = 4;
}  // namespace

std::size_t legacy_pdu_octets(const MeshPdu& pdu) {
  switch (pdu.kind) {
    case PduKind::segment_ack:
      // opcode (1) + SeqZero/OBO (2) + BlockAck (4)
      return kAdvFraming + kNetworkHeader + 7 + kNetMicControl;
    case PduKind::access:
      break;
  }
  if (pdu.seg) {
    // 4-octet segmented header; TransMIC is accounted in the segment budget
    return kAdvFraming + kNetworkHeader + 4 + pdu.payload.size() + kNetMicAccess;
  }
  return kAdvFraming + kNetworkHeader + 1 + pdu.payload.size() + kTransMic + kNetMicAccess;
}

std::size_t aux_pdu_octets(const MeshPdu& pdu) {
  if (pdu.kind == PduKind::segment_ack) return 7;
  return std::max<std::size_t>(1, pdu.payload.size());
}

}  // namespace meshsim
