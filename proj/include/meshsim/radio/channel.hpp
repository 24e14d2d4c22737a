#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <unordered_map>
#include <vector>

#include "meshsim/radio/frame.hpp"
#include "meshsim/radio/phy.hpp"
#include "meshsim/sim/kernel.hpp"
#include "meshsim/sim/random.hpp"

namespace meshsim {

enum class ReceptionOutcome : std::uint8_t {
  delivered,
  lost_below_sensitivity,
  lost_collision,
  lost_not_listening,
};

const char* to_string(ReceptionOutcome outcome);

/// Static propagation and receiver parameters.
struct LinkModel {
  std::size_t node_count = 0;
  std::vector<double> loss_db;  // node_count x node_count, row-major, symmetric
  double shadowing_db = 4.0;
  double capture_db = 10.0;
  double sensitivity_1m_dbm = -90.0;
  double sensitivity_2m_dbm = -85.0;

  double loss(NodeId a, NodeId b) const { return loss_db[static_cast<std::size_t>(a) * node_count + b]; }
  double sensitivity(const PhyMode& phy) const {
    return phy.kind == PhyKind::uncoded_2m ? sensitivity_2m_dbm : sensitivity_1m_dbm;
  }
  /// Throws ConfigError on size mismatch, asymmetry or negative shadowing.
  void validate() const;
};

/// A frame that overlaps the one being resolved, as seen at the receiver.
struct Interferer {
  SimTime start = 0;
  SimTime end = 0;
  double rssi_dbm = 0.0;
};

/// Everything needed to decide one reception, independent of channel state.
struct ReceptionQuery {
  SimTime start = 0;
  SimTime end = 0;
  double rssi_dbm = 0.0;
  double sensitivity_dbm = -90.0;
  double capture_db = 10.0;
  bool tuned_throughout = true;
  bool receiver_transmitting = false;
  std::span<const Interferer> overlapping;
};

/// Threshold-plus-capture decision: listening for the whole frame and not
/// transmitting, at or above sensitivity, and at least capture_db stronger
/// than every overlapping frame on the channel.
ReceptionOutcome decide_reception(const ReceptionQuery& query);

inline bool overlaps(SimTime a_start, SimTime a_end, SimTime b_start, SimTime b_end) {
  return a_start < b_end && b_start < a_end;
}

/// Receiver-side hooks the channel needs from the protocol layer.
class ReceiverPort {
 public:
  virtual ~ReceiverPort() = default;
  /// Whether `node`'s receiver is tuned to frame.channel for all of
  /// [frame.start, frame.end).
  virtual bool tuned_throughout(NodeId node, const ChannelFrame& frame) const = 0;
  virtual void on_reception(NodeId node, const ChannelFrame& frame, ReceptionOutcome outcome, double rssi_dbm) = 0;
};

struct ChannelStats {
  std::uint64_t frames = 0;
  std::uint64_t primary_frames = 0;
  Duration primary_airtime = 0;
  Duration secondary_airtime = 0;
  std::array<std::uint64_t, 4> outcomes{};  // indexed by ReceptionOutcome
  double tx_power_sum_dbm = 0.0;           // over mesh (non-background) frames
  std::uint64_t mesh_frames = 0;
};

/// Shared medium over the 40 BLE channels: schedules per-receiver resolution
/// at frame end and applies the reception rule against every overlapping
/// frame on the same channel.
class RadioChannel {
 public:
  /// Shadowing for frames of node i comes from root.stream(kShadowStreamBase + i).
  RadioChannel(EventKernel& kernel, LinkModel model, ReceiverPort& port, const RandomSource& root);

  static constexpr std::uint64_t kShadowStreamBase = 0x5A00;

  /// Registers `frame` (which must start now) and schedules resolution at its
  /// end for each receiver. Legacy and indication frames go to every other
  /// node; aux frames only to `aux_receivers`. Throws ProtocolError on a
  /// half-duplex violation, a channel/kind mismatch, or inconsistent timing.
  std::uint64_t begin_transmission(ChannelFrame frame, std::span<const NodeId> aux_receivers = {});

  /// Foreign traffic heard by every node at `rssi_dbm`.
  void begin_background(int channel, SimTime start, SimTime end, double rssi_dbm);

  /// Received power of frame `frame_id` at `node`, including its shadow draw.
  double rssi_at(std::uint64_t frame_id, NodeId node) const;

  bool transmitting_during(NodeId node, SimTime start, SimTime end) const;

  const LinkModel& model() const { return model_; }
  const ChannelStats& stats() const { return stats_; }

  /// Number of resolution events scheduled so far.
  std::uint64_t resolutions_scheduled() const { return resolutions_scheduled_; }

 private:
  struct ActiveFrame {
    ChannelFrame frame;
    std::vector<double> rssi;  // per node; background frames use one value
    bool uniform_rssi = false;
  };

  void resolve(NodeId receiver, std::uint64_t frame_id);
  void prune(SimTime now);

  EventKernel& kernel_;
  LinkModel model_;
  ReceiverPort& port_;
  std::vector<RandomSource> shadow_streams_;
  std::unordered_map<std::uint64_t, ActiveFrame> frames_;
  std::array<std::vector<std::uint64_t>, 40> by_channel_;
  std::vector<std::deque<std::pair<SimTime, SimTime>>> tx_history_;
  std::uint64_t next_frame_id_ = 1;
  std::uint64_t resolutions_scheduled_ = 0;
  SimTime last_prune_ = 0;
  ChannelStats stats_;
};

}  // namespace meshsim
