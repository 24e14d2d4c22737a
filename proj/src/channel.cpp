#include "meshsim/radio/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {
// Frames (and transmit history) are kept this long past their end so that
// every overlapping frame can still see them when it resolves.
constexpr Duration kRetention = milliseconds(20);
}  // namespace

const char* to_string(ReceptionOutcome outcome) {
  switch (outcome) {
    case ReceptionOutcome::delivered: return "delivered";
    case ReceptionOutcome::lost_below_sensitivity: return "lost-below-sensitivity";
    case ReceptionOutcome::lost_collision: return "lost-collision";
    case ReceptionOutcome::lost_not_listening: return "lost-not-listening";
  }
  return "?";
}

void LinkModel::validate() const {
  if (loss_db.size() != node_count * node_count) {
    throw ConfigError("link model: loss matrix has " + std::to_string(loss_db.size()) + " entries, expected " +
                      std::to_string(node_count * node_count));
  }
  for (std::size_t a = 0; a < node_count; ++a) {
    for (std::size_t b = a + 1; b < node_count; ++b) {
      if (loss_db[a * node_count + b] != loss_db[b * node_count + a]) {
        throw ConfigError("link model: loss(" + std::to_string(a) + "," + std::to_string(b) + ") != loss(" +
                          std::to_string(b) + "," + std::to_string(a) + ")");
      }
    }
  }
  if (!(shadowing_db >= 0.0)) throw ConfigError("link model: shadowing stddev must be >= 0");
}

ReceptionOutcome decide_reception(const ReceptionQuery& query) {
  if (!query.tuned_throughout || query.receiver_transmitting) return ReceptionOutcome::lost_not_listening;
  if (query.rssi_dbm < query.sensitivity_dbm) return ReceptionOutcome::lost_below_sensitivity;
  for (const Interferer& other : query.overlapping) {
    if (query.rssi_dbm - other.rssi_dbm < query.capture_db) return ReceptionOutcome::lost_collision;
  }
  return ReceptionOutcome::delivered;
}

RadioChannel::RadioChannel(EventKernel& kernel, LinkModel model, ReceiverPort& port, const RandomSource& root)
    : kernel_(kernel), model_(std::move(model)), port_(port), tx_history_(model_.node_count) {
  model_.validate();
  shadow_streams_.reserve(model_.node_count);
  for (std::size_t i = 0; i < model_.node_count; ++i) shadow_streams_.push_back(root.stream(kShadowStreamBase + i));
}

std::uint64_t RadioChannel::begin_transmission(ChannelFrame frame, std::span<const NodeId> aux_receivers) {
  const SimTime now = kernel_.now();
  if (frame.transmitter >= model_.node_count) throw ProtocolError("frame from unknown transmitter");
  if (frame.start != now) throw ProtocolError("frame must begin at the current clock");
  if (frame.end - frame.start != airtime(frame.octets, frame.phy)) {
    throw ProtocolError("frame duration does not match airtime of " + std::to_string(frame.octets) + " octets");
  }
  switch (frame.kind) {
    case FrameKind::legacy_adv:
    case FrameKind::ext_indication:
      if (!is_primary_channel(frame.channel)) {
        throw ProtocolError("advertising PDU on non-primary channel " + std::to_string(frame.channel));
      }
      break;
    case FrameKind::aux_data:
      if (!is_secondary_channel(frame.channel)) {
        throw ProtocolError("auxiliary PDU on non-secondary channel " + std::to_string(frame.channel));
      }
      break;
    case FrameKind::background:
      throw ProtocolError("background frames go through begin_background");
  }
  if (transmitting_during(frame.transmitter, frame.start, frame.end)) {
    throw ProtocolError("half-duplex violation: node " + std::to_string(frame.transmitter) +
                        " is already transmitting");
  }
  prune(now);

  frame.id = next_frame_id_++;
  ActiveFrame active{frame, std::vector<double>(model_.node_count, 0.0), false};
  RandomSource& shadow = shadow_streams_[frame.transmitter];
  for (NodeId r = 0; r < model_.node_count; ++r) {
    if (r == frame.transmitter) {
      active.rssi[r] = frame.power_dbm;
      continue;
    }
    active.rssi[r] =
        received_power_dbm(frame.power_dbm, model_.loss(frame.transmitter, r), shadow.normal(0.0, model_.shadowing_db));
  }

  tx_history_[frame.transmitter].emplace_back(frame.start, frame.end);
  by_channel_[static_cast<std::size_t>(frame.channel)].push_back(frame.id);

  ++stats_.frames;
  ++stats_.mesh_frames;
  stats_.tx_power_sum_dbm += frame.power_dbm;
  if (is_primary_channel(frame.channel)) {
    ++stats_.primary_frames;
    stats_.primary_airtime += frame.end - frame.start;
  } else {
    stats_.secondary_airtime += frame.end - frame.start;
  }

  const std::uint64_t id = frame.id;
  const SimTime end = frame.end;
  auto schedule_for = [&](NodeId r) {
    ++resolutions_scheduled_;
    kernel_.schedule(end, [this, r, id] { resolve(r, id); });
  };
  if (frame.kind == FrameKind::aux_data) {
    for (NodeId r : aux_receivers) {
      if (r != frame.transmitter && r < model_.node_count) schedule_for(r);
    }
  } else {
    for (NodeId r = 0; r < model_.node_count; ++r) {
      if (r != frame.transmitter) schedule_for(r);
    }
  }
  frames_.emplace(id, std::move(active));
  return id;
}

void RadioChannel::begin_background(int channel, SimTime start, SimTime end, double rssi_dbm) {
  if (channel < 0 || channel > 39) throw ProtocolError("background frame on invalid channel");
  if (start != kernel_.now() || end <= start) throw ProtocolError("background frame timing");
  prune(start);
  ChannelFrame frame;
  frame.id = next_frame_id_++;
  frame.kind = FrameKind::background;
  frame.channel = channel;
  frame.start = start;
  frame.end = end;
  frame.power_dbm = rssi_dbm;
  by_channel_[static_cast<std::size_t>(channel)].push_back(frame.id);
  ++stats_.frames;
  frames_.emplace(frame.id, ActiveFrame{frame, {rssi_dbm}, true});
}

double RadioChannel::rssi_at(std::uint64_t frame_id, NodeId node) const {
  const ActiveFrame& active = frames_.at(frame_id);
  return active.uniform_rssi ? active.rssi.front() : active.rssi.at(node);
}

bool RadioChannel::transmitting_during(NodeId node, SimTime start, SimTime end) const {
  if (node >= tx_history_.size()) return false;
  const auto& history = tx_history_[node];
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (overlaps(it->first, it->second, start, end)) return true;
    if (it->second + kRetention < start) break;
  }
  return false;
}

void RadioChannel::resolve(NodeId receiver, std::uint64_t frame_id) {
  const ActiveFrame& active = frames_.at(frame_id);
  const ChannelFrame& frame = active.frame;

  std::vector<Interferer> interferers;
  for (std::uint64_t other_id : by_channel_[static_cast<std::size_t>(frame.channel)]) {
    if (other_id == frame_id) continue;
    const ActiveFrame& other = frames_.at(other_id);
    if (!overlaps(frame.start, frame.end, other.frame.start, other.frame.end)) continue;
    interferers.push_back(
        {other.frame.start, other.frame.end, other.uniform_rssi ? other.rssi.front() : other.rssi[receiver]});
  }

  ReceptionQuery query;
  query.start = frame.start;
  query.end = frame.end;
  query.rssi_dbm = active.rssi[receiver];
  query.sensitivity_dbm = model_.sensitivity(frame.phy);
  query.capture_db = model_.capture_db;
  query.tuned_throughout = port_.tuned_throughout(receiver, frame);
  query.receiver_transmitting = transmitting_during(receiver, frame.start, frame.end);
  query.overlapping = interferers;

  const ReceptionOutcome outcome = decide_reception(query);
  ++stats_.outcomes[static_cast<std::size_t>(outcome)];
  port_.on_reception(receiver, frame, outcome, query.rssi_dbm);
}

void RadioChannel::prune(SimTime now) {
  if (now - last_prune_ < milliseconds(10)) return;
  last_prune_ = now;
  const SimTime horizon = now - kRetention;
  for (auto& ids : by_channel_) {
    std::erase_if(ids, [&](std::uint64_t id) {
      auto it = frames_.find(id);
      if (it->second.frame.end < horizon) {
        frames_.erase(it);
        return true;
      }
      return false;
    });
  }
  for (auto& history : tx_history_) {
    while (!history.empty() && history.front().second < horizon) history.pop_front();
  }
}

}  // namespace meshsim
