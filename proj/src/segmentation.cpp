#include "meshsim/mesh/segmentation.hpp"

#include <algorithm>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

std::size_t segment_count(std::size_t payload_octets, std::size_t max_unsegmented) {
  if (payload_octets <= max_unsegmented) return 1;
  return (payload_octets + kSegmentCapacity - 1) / kSegmentCapacity;
}

std::vector<MeshPdu> segment_message(std::span<const std::uint8_t> payload, const MeshPdu& header,
                                     std::size_t max_unsegmented) {
  if (payload.size() > kMaxAccessPayload) {
    throw ConfigError("payload of " + std::to_string(payload.size()) + " octets exceeds the 380-octet transport limit");
  }
  std::vector<MeshPdu> out;
  if (payload.size() <= max_unsegmented) {
    MeshPdu pdu = header;
    pdu.seg.reset();
    pdu.payload.assign(payload.begin(), payload.end());
    out.push_back(std::move(pdu));
    return out;
  }
  const std::size_t count = segment_count(payload.size(), max_unsegmented);
  const auto tag = static_cast<std::uint16_t>(header.seq & 0x1FFF);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    MeshPdu pdu = header;
    pdu.seq = (header.seq + static_cast<std::uint32_t>(i)) & 0xFFFFFF;
    pdu.seg = SegmentHeader{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(count), tag};
    const std::size_t begin = i * kSegmentCapacity;
    const std::size_t end = std::min(payload.size(), begin + kSegmentCapacity);
    pdu.payload.assign(payload.begin() + static_cast<std::ptrdiff_t>(begin),
                       payload.begin() + static_cast<std::ptrdiff_t>(end));
    out.push_back(std::move(pdu));
  }
  return out;
}

Reassembler::Result Reassembler::add(const MeshPdu& pdu) {
  Result result;
  const SegmentHeader& seg = *pdu.seg;
  const Key key{pdu.src.value, seg.msg_tag};
  result.seg_count = seg.count;

  if (completed_.count(key) != 0) {
    result.status = Status::already_complete;
    result.received_mask = full_mask(seg.count);
    return result;
  }
  if (seg.count == 0 || seg.index >= seg.count || seg.count > kMaxSegments) {
    ++anomalies_;
    result.status = Status::anomaly;
    return result;
  }

  auto [it, inserted] = buffers_.try_emplace(key);
  Buffer& buf = it->second;
  if (inserted) {
    buf.seg_count = seg.count;
    buf.parts.resize(seg.count);
  } else if (buf.seg_count != seg.count) {
    ++anomalies_;
    result.status = Status::anomaly;
    return result;
  }

  const std::uint32_t bit = 1u << seg.index;
  if (buf.mask & bit) {
    result.status = Status::duplicate;
    result.received_mask = buf.mask;
    return result;
  }
  buf.mask |= bit;
  buf.parts[seg.index] = pdu.payload;
  result.received_mask = buf.mask;

  if (buf.mask != full_mask(buf.seg_count)) {
    result.status = Status::incomplete;
    return result;
  }
  for (auto& part : buf.parts) result.message.insert(result.message.end(), part.begin(), part.end());
  result.status = Status::complete;
  buffers_.erase(it);
  remember_completed(key);
  return result;
}

bool Reassembler::discard(Key key) { return buffers_.erase(key) != 0; }

std::uint32_t Reassembler::received_mask(Key key) const {
  auto it = buffers_.find(key);
  return it == buffers_.end() ? 0 : it->second.mask;
}

void Reassembler::remember_completed(Key key) {
  constexpr std::size_t kRemembered = 64;
  completed_[key] = true;
  completed_order_.push_back(key);
  if (completed_order_.size() > kRemembered) {
    completed_.erase(completed_order_.front());
    completed_order_.pop_front();
  }
}

}  // namespace meshsim
