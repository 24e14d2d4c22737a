#include "meshsim/mesh/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {

LinkModel checked(LinkModel link, std::size_t nodes) {
  if (link.node_count != nodes) {
    throw ConfigError("link model covers " + std::to_string(link.node_count) + " nodes but " +
                      std::to_string(nodes) + " node configs were given");
  }
  return link;
}

}  // namespace

MeshNetwork::MeshNetwork(EventKernel& kernel, LinkModel link, MeshParams params, std::vector<NodeConfig> nodes,
                         const RandomSource& root, NetworkObserver* observer)
    : kernel_(kernel),
      params_(std::move(params)),
      channel_(kernel, checked(std::move(link), nodes.size()), *this, root),
      observer_(observer),
      interference_rng_(root.stream(kInterferenceStream)) {
  if (params_.adv.interval <= 0) throw ConfigError("advertising interval must be positive");
  if (params_.adv.delay_max < 0) throw ConfigError("advertising delay bound must be non-negative");
  if (params_.scan.interval <= 0) throw ConfigError("scan interval must be positive");
  if (params_.scan.window <= 0 || params_.scan.window > params_.scan.interval) {
    throw ConfigError("scan window must lie in (0, scan interval]");
  }
  if (params_.transport.retry_interval <= 0) throw ConfigError("retry interval must be positive");
  if (params_.transport.default_ttl > kMaxTtl) throw ConfigError("default TTL above 127");
  if (params_.power_control) {
    PowerControlConfig probe = params_.power;
    for (const NodeConfig& cfg : nodes) {
      probe.p_max_dbm = cfg.tx_power_dbm;
      probe.validate(channel_.model().sensitivity_1m_dbm);
    }
  }

  nodes_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeConfig& cfg = nodes[i];
    if (cfg.n_adv_events_source < 1 || cfg.n_adv_events_relay < 1) {
      throw ConfigError("node " + std::to_string(i) + ": advertising event counts must be >= 1");
    }
    NodeState state;
    state.id = static_cast<NodeId>(i);
    state.address = MeshAddress::of_node(state.id);
    state.config = cfg;
    state.scanner = params_.scan;
    state.cache = NetworkCache(params_.transport.cache_capacity);
    state.rssi = RssiObservation(params_.power.window);
    state.rng = root.stream(kNodeStreamBase + i);
    if (params_.randomize_scan_phase) {
      state.scanner.phase = static_cast<Duration>(state.rng.index(static_cast<std::size_t>(3 * params_.scan.interval)));
    }
    nodes_.push_back(std::move(state));
  }
  schedule_interference();
}

// ---------------------------------------------------------------------------
// advertising bearer

Duration MeshNetwork::draw_adv_delay(NodeState& node) {
  return from_ms(node.rng.uniform(0.0, to_ms(params_.adv.delay_max)));
}

bool MeshNetwork::advertise_relay(NodeId id, std::shared_ptr<const MeshPdu> pdu, int n_events) {
  NodeState& node = nodes_.at(id);
  const std::size_t limit = params_.adv.relay_queue_limit;
  if (limit != 0 && node.queued_relays >= limit) {
    ++node.relay_overflows;
    return false;
  }
  advertise(id, std::move(pdu), n_events);
  node.adv_queue.back().relay = true;
  ++node.queued_relays;
  return true;
}

void MeshNetwork::advertise(NodeId id, std::shared_ptr<const MeshPdu> pdu, int n_events,
                            std::function<void()> on_done) {
  if (n_events < 1) throw ConfigError("advertise requires at least one event");
  NodeState& node = nodes_.at(id);
  node.adv_queue.push_back({std::move(pdu), n_events, false, std::move(on_done)});
  if (node.adv_active) return;
  node.adv_active = true;
  const SimTime start = std::max(kernel_.now(), node.busy_until) + draw_adv_delay(node);
  kernel_.schedule(start, [this, id] { run_adv_event(id); });
}

double MeshNetwork::event_tx_power(const NodeState& node) const {
  if (!params_.power_control) return node.config.tx_power_dbm;
  PowerControlConfig cfg = params_.power;
  cfg.p_max_dbm = node.config.tx_power_dbm;
  return power_control(cfg, node.rssi);
}

void MeshNetwork::transmit(NodeId id, ChannelFrame frame) {
  std::vector<NodeId> receivers;
  if (frame.kind == FrameKind::aux_data) {
    auto it = aux_followers_.find(frame.aux_key);
    if (it != aux_followers_.end()) {
      receivers = std::move(it->second);
      aux_followers_.erase(it);
    }
  }
  frame.start = kernel_.now();
  frame.end = frame.start + airtime(frame.octets, frame.phy);
  frame.transmitter = id;
  frame.id = channel_.begin_transmission(frame, receivers);
  if (observer_) observer_->on_frame(frame);
}

void MeshNetwork::run_adv_event(NodeId id) {
  NodeState& node = nodes_[id];
  const AdvQueueEntry& entry = node.adv_queue.front();
  const SimTime t0 = kernel_.now();
  node.last_event_start = t0;
  const double power = event_tx_power(node);
  const Duration turnaround = params_.adv.turnaround;
  SimTime finish = t0;

  if (!params_.extended.enabled) {
    ChannelFrame frame;
    frame.kind = FrameKind::legacy_adv;
    frame.phy = kLe1M;
    frame.power_dbm = power;
    frame.octets = legacy_pdu_octets(*entry.pdu);
    frame.pdu = entry.pdu;
    const Duration air = airtime(frame.octets, kLe1M);
    for (int k = 0; k < 3; ++k) {
      frame.channel = kPrimaryChannels[k];
      kernel_.schedule(t0 + k * (air + turnaround), [this, id, frame] { transmit(id, frame); });
    }
    finish = t0 + 2 * (air + turnaround) + air;
  } else {
    const ExtendedParams& ext = params_.extended;
    const Duration ind_air = airtime(ext.indication_octets, kLe1M);
    const SimTime last_ind_end = t0 + 2 * (ind_air + turnaround) + ind_air;
    const SimTime aux_start = last_ind_end + ext.aux_offset;
    const std::uint64_t key = next_aux_key_++;
    const int aux_channel = static_cast<int>(node.rng.index(kSecondaryChannelCount));

    ChannelFrame ind;
    ind.kind = FrameKind::ext_indication;
    ind.phy = kLe1M;
    ind.power_dbm = power;
    ind.octets = ext.indication_octets;
    ind.pdu = entry.pdu;
    for (int k = 0; k < 3; ++k) {
      const SimTime start = t0 + k * (ind_air + turnaround);
      ind.channel = kPrimaryChannels[k];
      ind.indication = ExtAdvIndication{aux_channel, aux_start - (start + ind_air), ext.aux_phy, ext.indication_octets, key};
      kernel_.schedule(start, [this, id, ind] { transmit(id, ind); });
    }

    ChannelFrame aux;
    aux.kind = FrameKind::aux_data;
    aux.phy = ext.aux_phy;
    aux.power_dbm = power;
    aux.channel = aux_channel;
    aux.octets = aux_pdu_octets(*entry.pdu);
    aux.pdu = entry.pdu;
    aux.aux_key = key;
    kernel_.schedule(aux_start, [this, id, aux] { transmit(id, aux); });
    finish = aux_start + airtime(aux.octets, aux.phy);
  }
  node.busy_until = finish;
  kernel_.schedule(finish, [this, id] { finish_adv_event(id); });
}

void MeshNetwork::finish_adv_event(NodeId id) {
  NodeState& node = nodes_[id];
  AdvQueueEntry& entry = node.adv_queue.front();
  bool same_pdu = true;
  if (--entry.events_remaining == 0) {
    std::function<void()> done = std::move(entry.on_done);
    if (entry.relay) --node.queued_relays;
    node.adv_queue.pop_front();
    same_pdu = false;
    if (done) done();
  }
  if (node.adv_queue.empty()) {
    node.adv_active = false;
    return;
  }
  // events of one PDU are advInterval + advDelay apart; the next PDU only
  // waits for the previous one to finish
  SimTime next = same_pdu ? node.last_event_start + params_.adv.interval : kernel_.now();
  next = std::max(next, kernel_.now()) + draw_adv_delay(node);
  kernel_.schedule(next, [this, id] { run_adv_event(id); });
}

// ---------------------------------------------------------------------------
// scanning and reception

std::optional<int> MeshNetwork::scanner_channel_at(NodeId id, SimTime t) const {
  return meshsim::scanner_channel_at(nodes_.at(id).scanner, t);
}

bool MeshNetwork::tuned_throughout(NodeId id, const ChannelFrame& frame) const {
  const NodeState& node = nodes_[id];
  if (frame.kind == FrameKind::aux_data) {
    return std::any_of(node.aux_follows.begin(), node.aux_follows.end(),
                       [&](const AuxFollow& f) { return f.aux_key == frame.aux_key; });
  }
  for (const AuxFollow& f : node.aux_follows) {
    if (overlaps(f.start, f.end, frame.start, frame.end)) return false;
  }
  return scanner_tuned_throughout(node.scanner, frame.channel, frame.start, frame.end);
}

void MeshNetwork::on_reception(NodeId id, const ChannelFrame& frame, ReceptionOutcome outcome, double rssi_dbm) {
  if (outcome != ReceptionOutcome::delivered) return;
  if (loss_script_ && loss_script_(frame, id, kernel_.now())) return;
  NodeState& node = nodes_[id];
  if (is_primary_channel(frame.channel)) node.rssi.observe(frame.channel, rssi_dbm);

  switch (frame.kind) {
    case FrameKind::legacy_adv:
    case FrameKind::aux_data:
      on_network_receive(id, *frame.pdu);
      break;
    case FrameKind::ext_indication:
      follow_aux(id, frame);
      break;
    case FrameKind::background:
      break;
  }
}

void MeshNetwork::follow_aux(NodeId id, const ChannelFrame& indication) {
  NodeState& node = nodes_[id];
  const ExtAdvIndication& ptr = *indication.indication;
  const SimTime start = indication.end + ptr.aux_offset;
  const SimTime end = start + airtime(aux_pdu_octets(*indication.pdu), ptr.aux_phy);
  const SimTime now = kernel_.now();
  while (!node.aux_follows.empty() && node.aux_follows.front().end < now) node.aux_follows.pop_front();
  for (const AuxFollow& f : node.aux_follows) {
    if (f.aux_key == ptr.aux_key || overlaps(f.start, f.end, start, end)) return;
  }
  node.aux_follows.push_back({ptr.aux_key, start, end});
  aux_followers_[ptr.aux_key].push_back(id);
}

// ---------------------------------------------------------------------------
// network layer

bool MeshNetwork::subscribed(const NodeState& node, MeshAddress dst) const {
  if (dst.is_unicast()) return dst == node.address;
  const auto& subs = node.config.subscriptions;
  return std::find(subs.begin(), subs.end(), dst.value) != subs.end();
}

NetworkActions MeshNetwork::on_network_receive(NodeId id, const MeshPdu& pdu) {
  NodeState& node = nodes_.at(id);
  NetworkActions actions;
  if (!node.cache.insert(pdu.src.value, pdu.seq)) {
    actions.drop = true;
    return actions;
  }
  actions.deliver = subscribed(node, pdu.dst);
  actions.relay = node.config.relay_enabled && pdu.ttl >= 2 && pdu.src != node.address &&
                  (params_.relay_own_unicast || pdu.dst != node.address);

  if (actions.deliver) transport_receive(id, pdu);
  if (actions.relay) {
    auto copy = std::make_shared<MeshPdu>(pdu);
    copy->ttl = static_cast<std::uint8_t>(pdu.ttl - 1);
    if (advertise_relay(id, std::move(copy), node.config.n_adv_events_relay)) ++node.relayed_pdus;
  }
  return actions;
}

std::shared_ptr<MeshPdu> MeshNetwork::make_origin_pdu(NodeState& node, MeshAddress dst) {
  auto pdu = std::make_shared<MeshPdu>();
  pdu->src = node.address;
  pdu->dst = dst;
  pdu->ttl = params_.transport.default_ttl;
  return pdu;
}

void MeshNetwork::originate(NodeId id, std::shared_ptr<MeshPdu> pdu, int n_events, std::function<void()> on_done) {
  NodeState& node = nodes_[id];
  pdu->seq = node.next_seq++ & 0xFFFFFF;
  node.cache.insert(pdu->src.value, pdu->seq);
  ++node.originated_pdus;
  advertise(id, std::move(pdu), n_events, std::move(on_done));
}

// ---------------------------------------------------------------------------
// lower transport

std::size_t MeshNetwork::unsegmented_limit() const {
  return params_.extended.enabled ? params_.extended.max_unsegmented : kMaxUnsegmentedPayload;
}

void MeshNetwork::transport_send(NodeId id, const MeshPdu& header, const std::vector<std::uint8_t>& payload,
                                 int n_events, std::function<void()> on_done, bool reliable_segments) {
  NodeState& node = nodes_[id];
  MeshPdu base = header;
  base.seq = node.next_seq;
  std::vector<MeshPdu> pdus = segment_message(payload, base, unsegmented_limit());

  if (pdus.size() == 1) {
    originate(id, std::make_shared<MeshPdu>(std::move(pdus.front())), n_events, std::move(on_done));
    return;
  }

  if (!reliable_segments || !header.dst.is_unicast()) {
    // unacknowledged segmented transfer: each segment once, no block acks
    auto remaining = std::make_shared<std::size_t>(pdus.size());
    for (MeshPdu& seg : pdus) {
      auto pdu = std::make_shared<MeshPdu>(std::move(seg));
      pdu->seq = 0;  // reassigned by originate
      originate(id, std::move(pdu), n_events, [remaining, on_done] {
        if (--*remaining == 0 && on_done) on_done();
      });
    }
    return;
  }

  const std::uint16_t tag = pdus.front().seg->msg_tag;
  SenderSession session;
  session.app_msg_id = header.app_msg_id;
  session.header = pdus.front();
  session.header.payload.clear();
  for (MeshPdu& seg : pdus) session.segments.push_back(std::move(seg.payload));
  node.sessions[tag] = std::move(session);
  send_missing_segments(id, tag);
}

void MeshNetwork::send_missing_segments(NodeId id, std::uint16_t tag) {
  NodeState& node = nodes_[id];
  SenderSession& session = node.sessions.at(tag);
  kernel_.cancel(session.timer);
  session.timer = {};
  const auto count = static_cast<std::uint8_t>(session.segments.size());
  std::size_t resent = 0;
  for (std::uint8_t i = 0; i < count; ++i) {
    if (session.acked_mask & (1u << i)) continue;
    auto pdu = std::make_shared<MeshPdu>(session.header);
    pdu->seg = SegmentHeader{i, count, tag};
    pdu->payload = session.segments[i];
    ++session.queued;
    ++resent;
    originate(id, std::move(pdu), node.config.n_adv_events_source, [this, id, tag] {
      auto it = nodes_[id].sessions.find(tag);
      if (it == nodes_[id].sessions.end()) return;
      SenderSession& s = it->second;
      if (--s.queued == 0) {
        s.timer = kernel_.schedule_after(params_.transport.seg_ack_timeout, [this, id, tag] { on_segment_timer(id, tag); });
      }
    });
  }
  if (session.rounds > 0 && observer_) observer_->on_retransmission(session.app_msg_id, resent);
}

void MeshNetwork::on_segment_timer(NodeId id, std::uint16_t tag) {
  NodeState& node = nodes_[id];
  auto it = node.sessions.find(tag);
  if (it == node.sessions.end()) return;
  SenderSession& session = it->second;
  session.timer = {};
  if (session.acked_mask == full_mask(static_cast<std::uint8_t>(session.segments.size()))) {
    end_session(id, tag);
    return;
  }
  if (session.rounds >= params_.transport.seg_retransmit_rounds) {
    end_session(id, tag);
    return;
  }
  ++session.rounds;
  send_missing_segments(id, tag);
}

void MeshNetwork::end_session(NodeId id, std::uint16_t tag) {
  NodeState& node = nodes_[id];
  auto it = node.sessions.find(tag);
  if (it == node.sessions.end()) return;
  kernel_.cancel(it->second.timer);
  const AppMsgId app = it->second.app_msg_id;
  node.sessions.erase(it);
  auto pub = node.publications.find(app);
  if (pub != node.publications.end() && pub->second.active_session == tag) pub->second.active_session.reset();
}

void MeshNetwork::handle_block_ack(NodeId id, const MeshPdu& pdu) {
  NodeState& node = nodes_[id];
  auto it = node.sessions.find(pdu.block_ack.msg_tag);
  if (it == node.sessions.end()) return;
  SenderSession& session = it->second;
  if (session.header.dst != pdu.src) return;
  session.acked_mask |= pdu.block_ack.received_mask;
  const auto count = static_cast<std::uint8_t>(session.segments.size());
  if (session.acked_mask == full_mask(count)) {
    end_session(id, pdu.block_ack.msg_tag);
    return;
  }
  if (session.queued > 0) return;  // missing segments are already on their way
  if (session.rounds >= params_.transport.seg_retransmit_rounds) {
    end_session(id, pdu.block_ack.msg_tag);
    return;
  }
  ++session.rounds;
  send_missing_segments(id, pdu.block_ack.msg_tag);
}

void MeshNetwork::send_block_ack(NodeId id, const MeshPdu& segment, std::uint32_t mask) {
  NodeState& node = nodes_[id];
  auto ack = make_origin_pdu(node, segment.src);
  ack->kind = PduKind::segment_ack;
  ack->block_ack = BlockAck{segment.seg->msg_tag, mask};
  ack->app_msg_id = segment.app_msg_id;
  originate(id, std::move(ack), node.config.n_adv_events_source);
}

void MeshNetwork::transport_receive(NodeId id, const MeshPdu& pdu) {
  if (pdu.kind == PduKind::segment_ack) {
    handle_block_ack(id, pdu);
    return;
  }
  if (!pdu.seg) {
    access_receive(id, pdu, pdu.payload);
    return;
  }

  NodeState& node = nodes_[id];
  const Reassembler::Key key{pdu.src.value, pdu.seg->msg_tag};
  const bool acked_transfer = pdu.dst.is_unicast();
  Reassembler::Result result = node.reassembler.add(pdu);
  switch (result.status) {
    case Reassembler::Status::complete: {
      auto timer = node.reassembly_timers.find(key);
      if (timer != node.reassembly_timers.end()) {
        kernel_.cancel(timer->second);
        node.reassembly_timers.erase(timer);
      }
      if (acked_transfer) {
        send_block_ack(id, pdu, result.received_mask);
        node.last_reack[key] = kernel_.now();
      }
      access_receive(id, pdu, result.message);
      break;
    }
    case Reassembler::Status::incomplete: {
      auto& timer = node.reassembly_timers[key];
      kernel_.cancel(timer);
      timer = kernel_.schedule_after(params_.transport.reassembly_timeout, [this, id, key] {
        nodes_[id].reassembler.discard(key);
        nodes_[id].reassembly_timers.erase(key);
      });
      if (acked_transfer && pdu.seg->index + 1 == pdu.seg->count) send_block_ack(id, pdu, result.received_mask);
      break;
    }
    case Reassembler::Status::already_complete: {
      if (!acked_transfer) break;
      auto last = node.last_reack.find(key);
      if (last != node.last_reack.end() && kernel_.now() - last->second < params_.transport.seg_ack_timeout) break;
      node.last_reack[key] = kernel_.now();
      send_block_ack(id, pdu, result.received_mask);
      break;
    }
    case Reassembler::Status::duplicate:
      break;
    case Reassembler::Status::anomaly:
      if (observer_) observer_->on_anomaly(id, "conflicting segment count");
      break;
  }
}

// ---------------------------------------------------------------------------
// access layer

void MeshNetwork::access_receive(NodeId id, const MeshPdu& meta, const std::vector<std::uint8_t>& /*payload*/) {
  NodeState& node = nodes_[id];
  if (meta.opcode == AccessOpcode::command) {
    if (observer_) observer_->on_command_delivered(id, meta.app_msg_id, kernel_.now());
    if (meta.ack_required) send_app_ack(id, meta);
    return;
  }
  if (!meta.src.is_unicast() || meta.src.node() >= nodes_.size()) return;
  if (observer_) observer_->on_status_received(id, meta.src.node(), meta.app_msg_id, kernel_.now());
  auto it = node.publications.find(meta.app_msg_id);
  if (it == node.publications.end() || it->second.dst != meta.src) return;
  kernel_.cancel(it->second.retry_timer);
  node.publications.erase(it);
}

void MeshNetwork::send_app_ack(NodeId id, const MeshPdu& command) {
  NodeState& node = nodes_.at(id);
  auto status = make_origin_pdu(node, command.src);
  status->opcode = AccessOpcode::status;
  status->app_msg_id = command.app_msg_id;
  status->payload.assign(std::min(params_.transport.status_payload, kMaxUnsegmentedPayload),
                         static_cast<std::uint8_t>(command.app_msg_id & 0xFF));
  originate(id, std::move(status), node.config.n_adv_events_source);
}

AppMsgId MeshNetwork::publish(NodeId id, MeshAddress dst, std::vector<std::uint8_t> payload, PublishMode mode,
                              AppMsgId app) {
  if (id >= nodes_.size()) throw ConfigError("publish from unknown node " + std::to_string(id));
  if (payload.size() > kMaxAccessPayload) {
    throw ConfigError("payload of " + std::to_string(payload.size()) + " octets exceeds the 380-octet transport limit");
  }
  if (dst.is_unicast()) {
    if (dst.value == 0 || dst.node() >= nodes_.size() || dst.node() == id) {
      throw ConfigError("unknown unicast destination " + std::to_string(dst.value));
    }
  } else if (std::none_of(nodes_.begin(), nodes_.end(), [&](const NodeState& n) { return subscribed(n, dst); })) {
    throw ConfigError("group address " + std::to_string(dst.value) + " has no subscribers");
  }
  NodeState& node = nodes_[id];

  if (mode == PublishMode::group_acked_fixed) {
    MeshPdu header = *make_origin_pdu(node, dst);
    header.opcode = AccessOpcode::command;
    header.ack_required = true;
    header.app_msg_id = app;
    transport_send(id, header, payload, 2, {}, false);
    return app;
  }

  AppPublication& pub = node.publications[app];
  pub.id = app;
  pub.dst = dst;
  pub.payload = std::move(payload);
  pub.first_sent = kernel_.now();
  start_attempt(id, pub);
  arm_retry(id, app);
  return app;
}

void MeshNetwork::start_attempt(NodeId id, AppPublication& pub) {
  NodeState& node = nodes_[id];
  ++pub.attempts;
  MeshPdu header = *make_origin_pdu(node, pub.dst);
  header.opcode = AccessOpcode::command;
  header.ack_required = true;
  header.app_msg_id = pub.id;
  if (segment_count(pub.payload.size(), unsegmented_limit()) > 1) {
    pub.active_session = static_cast<std::uint16_t>(node.next_seq & 0x1FFF);
    transport_send(id, header, pub.payload, node.config.n_adv_events_source, {}, true);
    return;
  }
  ++pub.inflight_pdus;
  const AppMsgId app = pub.id;
  transport_send(id, header, pub.payload, node.config.n_adv_events_source, [this, id, app] {
    auto it = nodes_[id].publications.find(app);
    if (it != nodes_[id].publications.end()) --it->second.inflight_pdus;
  }, true);
}

void MeshNetwork::arm_retry(NodeId id, AppMsgId app) {
  AppPublication& pub = nodes_[id].publications.at(app);
  pub.retry_timer = kernel_.schedule_after(params_.transport.retry_interval, [this, id, app] { on_retry_timer(id, app); });
}

void MeshNetwork::on_retry_timer(NodeId id, AppMsgId app) {
  NodeState& node = nodes_[id];
  auto it = node.publications.find(app);
  if (it == node.publications.end()) return;
  AppPublication& pub = it->second;
  pub.retry_timer = {};
  if (kernel_.now() - pub.first_sent >= params_.transport.guard) {
    node.publications.erase(it);
    if (observer_) observer_->on_publication_abandoned(app, AbandonReason::guard, kernel_.now());
    return;
  }
  if (pub.inflight_pdus > 0 || pub.active_session) {
    arm_retry(id, app);
    return;
  }
  if (params_.transport.retry_cap != 0 && pub.attempts > params_.transport.retry_cap) {
    node.publications.erase(it);
    if (observer_) observer_->on_publication_abandoned(app, AbandonReason::retry_cap, kernel_.now());
    return;
  }
  if (observer_) observer_->on_retransmission(app, 1);
  start_attempt(id, pub);
  arm_retry(id, app);
}

bool MeshNetwork::publication_pending(NodeId id, AppMsgId app) const {
  return nodes_.at(id).publications.count(app) != 0;
}

std::size_t MeshNetwork::pending_publications() const {
  std::size_t total = 0;
  for (const NodeState& n : nodes_) total += n.publications.size();
  return total;
}

// ---------------------------------------------------------------------------
// background interference

void MeshNetwork::schedule_interference() {
  const InterferenceParams& p = params_.interference;
  if (p.rate_hz <= 0.0) return;
  const double total_rate = p.rate_hz * 40.0;
  const double u = interference_rng_.uniform(0.0, 1.0);
  const auto gap = static_cast<Duration>(std::ceil(-std::log1p(-u) / total_rate * 1e6));
  const int channel = static_cast<int>(interference_rng_.index(40));
  kernel_.schedule(kernel_.now() + gap, [this, channel] {
    const SimTime now = kernel_.now();
    channel_.begin_background(channel, now, now + params_.interference.frame_length, params_.interference.power_dbm);
    schedule_interference();
  });
}

}  // namespace meshsim
