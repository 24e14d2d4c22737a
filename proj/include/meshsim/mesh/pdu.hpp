#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace meshsim {

/// Dense node index, 0..N-1. The node's unicast address is index + 1.
using NodeId = std::uint32_t;
/// Harness correlation tag carried by every PDU belonging to one application
/// message (command, its status replies and transport acknowledgments).
using AppMsgId = std::uint64_t;

inline constexpr std::size_t kMaxUnsegmentedPayload = 11;
inline constexpr std::size_t kSegmentCapacity = 12;
inline constexpr std::size_t kMaxSegments = 32;
inline constexpr std::size_t kMaxAccessPayload = 380;
inline constexpr int kMaxTtl = 127;
inline constexpr std::uint16_t kGroupAddressBase = 0xC000;

enum class AddressKind : std::uint8_t { unicast, group };

struct MeshAddress {
  AddressKind kind = AddressKind::unicast;
  std::uint16_t value = 0;

  static constexpr MeshAddress unicast(std::uint16_t v) { return {AddressKind::unicast, v}; }
  static constexpr MeshAddress group(std::uint16_t v) { return {AddressKind::group, v}; }
  static constexpr MeshAddress of_node(NodeId node) {
    return {AddressKind::unicast, static_cast<std::uint16_t>(node + 1)};
  }

  bool is_unicast() const { return kind == AddressKind::unicast; }
  bool is_group() const { return kind == AddressKind::group; }
  /// Only meaningful for unicast addresses.
  NodeId node() const { return static_cast<NodeId>(value - 1); }

  friend bool operator==(const MeshAddress&, const MeshAddress&) = default;
};

struct SegmentHeader {
  std::uint8_t index = 0;
  std::uint8_t count = 1;
  std::uint16_t msg_tag = 0;  // 13-bit SeqZero of the first segment
  friend bool operator==(const SegmentHeader&, const SegmentHeader&) = default;
};

enum class PduKind : std::uint8_t { access, segment_ack };
enum class AccessOpcode : std::uint8_t { command, status };

struct BlockAck {
  std::uint16_t msg_tag = 0;
  std::uint32_t received_mask = 0;
  friend bool operator==(const BlockAck&, const BlockAck&) = default;
};

/// Network-layer PDU. Security fields are not modelled; their octets are still
/// counted when sizing frames.
struct MeshPdu {
  MeshAddress src;
  MeshAddress dst;
  std::uint32_t seq = 0;  // 24-bit
  std::uint8_t ttl = 7;
  PduKind kind = PduKind::access;
  std::optional<SegmentHeader> seg;
  std::vector<std::uint8_t> payload;

  // Access-layer metadata, identical across all segments of a message.
  AccessOpcode opcode = AccessOpcode::command;
  bool ack_required = false;
  // Valid for kind == segment_ack.
  BlockAck block_ack;

  AppMsgId app_msg_id = 0;

  friend bool operator==(const MeshPdu&, const MeshPdu&) = default;
};

/// Octets of the legacy advertising PDU carrying `pdu` (adv header, AdvA,
/// AD header, network header, lower transport, MICs). An 11-octet unsegmented
/// access payload and a full 12-octet segment both fill the 39-octet maximum.
std::size_t legacy_pdu_octets(const MeshPdu& pdu);

/// Octets sized on the auxiliary channel in extended mode: the access payload
/// itself (at least one octet).
std::size_t aux_pdu_octets(const MeshPdu& pdu);

}  // namespace meshsim
