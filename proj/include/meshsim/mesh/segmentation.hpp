#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "meshsim/mesh/pdu.hpp"

namespace meshsim {

/// Splits an access payload into network PDUs. Payloads up to
/// `max_unsegmented` octets yield one unsegmented PDU; longer ones yield
/// ceil(len / 12) segments that share msg_tag = first seq & 0x1FFF. Segment i
/// takes sequence number header.seq + i; every other header field is copied.
/// Throws ConfigError above 380 octets.
std::vector<MeshPdu> segment_message(std::span<const std::uint8_t> payload, const MeshPdu& header,
                                     std::size_t max_unsegmented = kMaxUnsegmentedPayload);

/// Number of PDUs segment_message would produce.
std::size_t segment_count(std::size_t payload_octets, std::size_t max_unsegmented = kMaxUnsegmentedPayload);

/// Receiver-side segment buffers keyed by (source, msg_tag). Timers live with
/// the caller; this class only tracks content.
class Reassembler {
 public:
  enum class Status : std::uint8_t {
    incomplete,        // buffered, more segments needed
    complete,          // this segment finished the message
    duplicate,         // segment already buffered
    already_complete,  // segment of a message completed earlier
    anomaly,           // seg_count disagrees with the existing buffer, which is kept
  };

  struct Result {
    Status status = Status::incomplete;
    std::vector<std::uint8_t> message;  // set when complete
    std::uint32_t received_mask = 0;
    std::uint8_t seg_count = 0;
  };

  struct Key {
    std::uint16_t src = 0;
    std::uint16_t msg_tag = 0;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  /// `pdu` must carry a segment header.
  Result add(const MeshPdu& pdu);

  /// Drops an incomplete buffer (reassembly timeout). Returns whether one existed.
  bool discard(Key key);

  bool buffering(Key key) const { return buffers_.count(key) != 0; }
  std::uint32_t received_mask(Key key) const;
  std::size_t anomalies() const { return anomalies_; }

 private:
  struct Buffer {
    std::uint8_t seg_count = 0;
    std::uint32_t mask = 0;
    std::vector<std::vector<std::uint8_t>> parts;
  };

  void remember_completed(Key key);

  std::map<Key, Buffer> buffers_;
  std::deque<Key> completed_order_;
  std::map<Key, bool> completed_;
  std::size_t anomalies_ = 0;
};

inline std::uint32_t full_mask(std::uint8_t seg_count) {
  return seg_count >= 32 ? 0xFFFFFFFFu : ((1u << seg_count) - 1u);
}

}  // namespace meshsim
