#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meshsim/mesh/cache.hpp"
#include "meshsim/mesh/pdu.hpp"
#include "meshsim/mesh/scanner.hpp"
#include "meshsim/mesh/segmentation.hpp"
#include "meshsim/opt/extended.hpp"
#include "meshsim/opt/power_control.hpp"
#include "meshsim/radio/channel.hpp"
#include "meshsim/sim/kernel.hpp"
#include "meshsim/sim/random.hpp"

namespace meshsim {

struct NodeConfig {
  bool relay_enabled = true;
  bool controller = false;
  bool slave = false;
  double tx_power_dbm = 0.0;
  int n_adv_events_source = 3;
  int n_adv_events_relay = 2;
  std::vector<std::uint16_t> subscriptions;  // group addresses
};

struct AdvertisingParams {
  Duration interval = milliseconds(20);
  Duration delay_max = milliseconds(10);  // advDelay ~ U[0, delay_max] per event
  Duration turnaround = 400;              // gap between the frames of one event
  /// Relay PDUs already queued beyond which a new relay PDU is dropped
  /// (buffer exhaustion); 0 = unbounded. Originated PDUs are always queued.
  std::size_t relay_queue_limit = 4;
};

struct TransportParams {
  Duration retry_interval = milliseconds(200);
  std::uint32_t retry_cap = 0;  // 0 = retry until acknowledged
  Duration guard = seconds(60);
  Duration seg_ack_timeout = milliseconds(200);
  Duration reassembly_timeout = milliseconds(200);
  int seg_retransmit_rounds = 4;
  std::size_t cache_capacity = 128;
  std::uint8_t default_ttl = 7;
  std::size_t status_payload = 4;
};

/// Foreign traffic: a Poisson stream of fixed-length frames on each of the 40
/// channels, heard by every node at the same power.
struct InterferenceParams {
  double rate_hz = 0.0;  // per channel; 0 disables
  double power_dbm = -75.0;
  Duration frame_length = 1000;
};

struct MeshParams {
  AdvertisingParams adv;
  ScannerConfig scan;
  TransportParams transport;
  ExtendedParams extended;
  bool power_control = false;
  PowerControlConfig power;  // p_max is taken per node from NodeConfig::tx_power_dbm
  InterferenceParams interference;
  /// Scanner rotation offsets are drawn per node in [0, 3 * scan interval).
  bool randomize_scan_phase = true;
  /// Whether a node re-advertises PDUs addressed to its own unicast address.
  bool relay_own_unicast = false;
};

enum class PublishMode : std::uint8_t { unicast_acked, group_acked_fixed };

struct NetworkActions {
  bool deliver = false;
  bool relay = false;
  bool drop = false;
};

enum class AbandonReason : std::uint8_t { guard, retry_cap };

/// Hooks for metrics collection and protocol audits. All callbacks run inside
/// kernel dispatch.
class NetworkObserver {
 public:
  virtual ~NetworkObserver() = default;
  virtual void on_frame(const ChannelFrame& /*frame*/) {}
  virtual void on_command_delivered(NodeId /*node*/, AppMsgId /*id*/, SimTime /*at*/) {}
  virtual void on_status_received(NodeId /*node*/, NodeId /*from*/, AppMsgId /*id*/, SimTime /*at*/) {}
  virtual void on_retransmission(AppMsgId /*id*/, std::size_t /*count*/) {}
  virtual void on_publication_abandoned(AppMsgId /*id*/, AbandonReason /*why*/, SimTime /*at*/) {}
  virtual void on_anomaly(NodeId /*node*/, std::string_view /*what*/) {}
};

struct AdvQueueEntry {
  std::shared_ptr<const MeshPdu> pdu;
  int events_remaining = 1;
  bool relay = false;
  std::function<void()> on_done;
};

struct AuxFollow {
  std::uint64_t aux_key = 0;
  SimTime start = 0;
  SimTime end = 0;
};

struct SenderSession {
  AppMsgId app_msg_id = 0;
  MeshPdu header;  // addressing and access metadata shared by all segments
  std::vector<std::vector<std::uint8_t>> segments;
  std::uint32_t acked_mask = 0;
  int rounds = 0;
  std::size_t queued = 0;
  EventHandle timer;
};

struct AppPublication {
  AppMsgId id = 0;
  MeshAddress dst;
  std::vector<std::uint8_t> payload;
  SimTime first_sent = 0;
  std::size_t attempts = 0;
  std::size_t inflight_pdus = 0;
  std::optional<std::uint16_t> active_session;
  EventHandle retry_timer;
};

/// Per-node protocol machine state.
struct NodeState {
  NodeId id = 0;
  MeshAddress address;
  NodeConfig config;
  ScannerConfig scanner;
  NetworkCache cache;
  Reassembler reassembler;
  RssiObservation rssi;
  RandomSource rng{0};
  std::uint32_t next_seq = 0;

  std::deque<AdvQueueEntry> adv_queue;
  bool adv_active = false;
  SimTime last_event_start = -seconds(3600);
  SimTime busy_until = 0;  // end of the event in progress

  std::deque<AuxFollow> aux_follows;

  std::map<std::uint16_t, SenderSession> sessions;  // by msg_tag
  std::map<Reassembler::Key, EventHandle> reassembly_timers;
  std::map<Reassembler::Key, SimTime> last_reack;
  std::unordered_map<AppMsgId, AppPublication> publications;

  std::uint64_t originated_pdus = 0;
  std::uint64_t relayed_pdus = 0;
  std::uint64_t relay_overflows = 0;
  std::size_t queued_relays = 0;
};

/// All nodes of one simulated network plus the shared radio channel.
class MeshNetwork final : public ReceiverPort {
 public:
  /// Node i draws its protocol randomness from root.stream(kNodeStreamBase + i)
  /// and the channel derives its shadowing streams from `root` as well.
  MeshNetwork(EventKernel& kernel, LinkModel link, MeshParams params, std::vector<NodeConfig> nodes,
              const RandomSource& root, NetworkObserver* observer = nullptr);

  static constexpr std::uint64_t kNodeStreamBase = 0x100;
  static constexpr std::uint64_t kInterferenceStream = 0x77;

  std::size_t size() const { return nodes_.size(); }
  const NodeState& node(NodeId id) const { return nodes_.at(id); }
  const MeshParams& params() const { return params_; }
  const RadioChannel& channel() const { return channel_; }
  EventKernel& kernel() { return kernel_; }

  /// Starts an application message. unicast_acked retries every retry
  /// interval until the destination's status arrives (or guard / cap);
  /// group_acked_fixed sends over exactly two advertising events. Throws
  /// ConfigError for payloads above 380 octets or unknown destinations.
  AppMsgId publish(NodeId node, MeshAddress dst, std::vector<std::uint8_t> payload, PublishMode mode, AppMsgId id);

  /// Queues `pdu` for `n_events` advertising events (FIFO with everything
  /// else the node sends). `on_done` runs after the last event.
  void advertise(NodeId node, std::shared_ptr<const MeshPdu> pdu, int n_events, std::function<void()> on_done = {});

  /// Queues a relayed PDU unless the node's relay buffers are exhausted.
  /// Returns whether it was queued.
  bool advertise_relay(NodeId node, std::shared_ptr<const MeshPdu> pdu, int n_events);

  /// Network-layer receive rule: cache, deliver, relay.
  NetworkActions on_network_receive(NodeId node, const MeshPdu& pdu);

  /// Replies to a received command with a status message to its source.
  void send_app_ack(NodeId node, const MeshPdu& command);

  std::optional<int> scanner_channel_at(NodeId node, SimTime t) const;

  bool publication_pending(NodeId node, AppMsgId id) const;
  std::size_t pending_publications() const;

  /// Test hook: return true to drop the reception of `frame` at `receiver`.
  using LossScript = std::function<bool(const ChannelFrame& frame, NodeId receiver, SimTime now)>;
  void set_loss_script(LossScript script) { loss_script_ = std::move(script); }

  // ReceiverPort
  bool tuned_throughout(NodeId node, const ChannelFrame& frame) const override;
  void on_reception(NodeId node, const ChannelFrame& frame, ReceptionOutcome outcome, double rssi_dbm) override;

 private:
  Duration draw_adv_delay(NodeState& node);
  void run_adv_event(NodeId id);
  void finish_adv_event(NodeId id);
  void transmit(NodeId id, ChannelFrame frame);
  double event_tx_power(const NodeState& node) const;

  std::shared_ptr<MeshPdu> make_origin_pdu(NodeState& node, MeshAddress dst);
  void originate(NodeId id, std::shared_ptr<MeshPdu> pdu, int n_events, std::function<void()> on_done = {});

  std::size_t unsegmented_limit() const;
  void start_attempt(NodeId id, AppPublication& pub);
  void arm_retry(NodeId id, AppMsgId app);
  void on_retry_timer(NodeId id, AppMsgId app);

  void transport_send(NodeId id, const MeshPdu& header, const std::vector<std::uint8_t>& payload, int n_events,
                      std::function<void()> on_done, bool reliable_segments);
  void send_missing_segments(NodeId id, std::uint16_t tag);
  void on_segment_timer(NodeId id, std::uint16_t tag);
  void end_session(NodeId id, std::uint16_t tag);
  void handle_block_ack(NodeId id, const MeshPdu& pdu);
  void send_block_ack(NodeId id, const MeshPdu& segment, std::uint32_t mask);

  void transport_receive(NodeId id, const MeshPdu& pdu);
  void access_receive(NodeId id, const MeshPdu& meta, const std::vector<std::uint8_t>& payload);

  void follow_aux(NodeId id, const ChannelFrame& indication);
  void schedule_interference();

  bool subscribed(const NodeState& node, MeshAddress dst) const;

  EventKernel& kernel_;
  MeshParams params_;
  std::vector<NodeState> nodes_;
  RadioChannel channel_;
  NetworkObserver* observer_;
  LossScript loss_script_;
  RandomSource interference_rng_;
  std::uint64_t next_aux_key_ = 1;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> aux_followers_;
};

}  // namespace meshsim
