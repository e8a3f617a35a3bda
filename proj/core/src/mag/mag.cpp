#include "pmipfm/mag/mag.hpp"

#include <algorithm>

namespace pmipfm::mag {

std::string_view to_string(EntryStatus status) {
  return status == EntryStatus::Temporary ? "temporary" : "permanent";
}

std::string_view to_string(HandshakeState state) {
  switch (state) {
    case HandshakeState::Idle: return "idle";
    case HandshakeState::Registering: return "registering";
    case HandshakeState::Discovering: return "discovering";
    case HandshakeState::Subscribing: return "subscribing";
    case HandshakeState::Ready: return "ready";
    case HandshakeState::UnknownLink: return "unknown-link";
    case HandshakeState::Refused: return "refused";
  }
  return "?";
}

namespace {

NodeId station(const LinkAddr& addr) { return NodeId{addr.to_string()}; }

std::string_view status_name(std::optional<EntryStatus> s) { return s ? to_string(*s) : "none"; }

}  // namespace

Mag::Mag(Context& ctx, MagConfig config) : ctx_(ctx), config_(std::move(config)) {
  if (config_.detection == DetectionSource::Syslog)
    throw std::invalid_argument("syslog attachment detection is not available; use mih");
}

void Mag::start() {
  handshake_ = HandshakeState::Registering;
  ctx_.send(ProtocolMessage::make(MessageKind::MihRegister, MihRegisterBody{ctx_.self()}, ctx_.self(), config_.mihf));
}

void Mag::on_message(const ProtocolMessage& msg) {
  switch (msg.kind) {
    case MessageKind::MihRegisterAck:
    case MessageKind::MihCapabilityDiscoverResp:
    case MessageKind::MihEventSubscribeConfirm:
    case MessageKind::MihLinkUp:
    case MessageKind::MihLinkDown: handle_mih(msg); break;
    case MessageKind::AaaResponse: on_aaa_response(msg.as<AaaResponseBody>()); break;
    case MessageKind::Pba: {
      const auto& pba = msg.as<PbaBody>();
      if (pba.lifetime == 0)
        handle_event(PbaDeregister{pba});
      else
        handle_event(PbaRegister{pba});
      break;
    }
    case MessageKind::NeighborAdvertisement: on_neighbor_advertisement(msg.as<NeighborAdvertisementBody>()); break;
    default: anomaly("unexpected-message", {{"kind", std::string(to_string(msg.kind))}});
  }
}

void Mag::handle_mih(const ProtocolMessage& msg) {
  switch (msg.kind) {
    case MessageKind::MihRegisterAck:
      if (handshake_ != HandshakeState::Registering) return anomaly("unexpected-register-ack");
      if (!msg.as<MihRegisterAckBody>().accepted) {
        handshake_ = HandshakeState::Refused;
        ctx_.trace("config-error", {{"reason", "mih-register-refused"}});
        return;
      }
      handshake_ = HandshakeState::Discovering;
      ctx_.send(ProtocolMessage::make(MessageKind::MihCapabilityDiscoverReq, MihCapabilityDiscoverReqBody{},
                                      ctx_.self(), config_.mihf));
      return;
    case MessageKind::MihCapabilityDiscoverResp: {
      if (handshake_ != HandshakeState::Discovering) return anomaly("unexpected-capability-response");
      const auto& links = msg.as<MihCapabilityDiscoverRespBody>().links;
      const bool known = std::any_of(links.begin(), links.end(),
                                     [&](const MihLinkCapability& c) { return c.link == config_.access_link; });
      if (!known) {
        handshake_ = HandshakeState::UnknownLink;
        ctx_.trace("config-error", {{"reason", "unknown-link"}, {"link", config_.access_link.value}});
        return;
      }
      handshake_ = HandshakeState::Subscribing;
      confirmations_pending_ = 2;
      ctx_.send(ProtocolMessage::make(MessageKind::MihEventSubscribeReq,
                                      MihEventSubscribeReqBody{config_.access_link, kLinkUpDownMask}, ctx_.self(),
                                      config_.mihf));
      return;
    }
    case MessageKind::MihEventSubscribeConfirm: {
      if (handshake_ != HandshakeState::Subscribing) return anomaly("unexpected-subscribe-confirm");
      if (!msg.as<MihEventSubscribeConfirmBody>().accepted) {
        handshake_ = HandshakeState::Refused;
        ctx_.trace("config-error", {{"reason", "subscription-refused"}, {"link", config_.access_link.value}});
        return;
      }
      if (--confirmations_pending_ == 0) {
        handshake_ = HandshakeState::Ready;
        ctx_.trace("mih-ready", {{"link", config_.access_link.value}});
      }
      return;
    }
    case MessageKind::MihLinkUp:
    case MessageKind::MihLinkDown: {
      const auto& ev = msg.as<MihLinkEventBody>();
      if (ev.link != config_.access_link) return anomaly("foreign-link-event", {{"link", ev.link.value}});
      if (msg.kind == MessageKind::MihLinkUp)
        handle_event(Attachment{ev.addr});
      else
        handle_event(Detachment{ev.addr});
      return;
    }
    default: return;
  }
}

void Mag::handle_event(const MagEvent& ev) {
  if (const auto* a = std::get_if<Attachment>(&ev)) return on_attachment(a->addr);
  if (const auto* d = std::get_if<Detachment>(&ev)) return on_detachment(d->addr, "link-down");
  if (const auto* r = std::get_if<PbaRegister>(&ev)) return on_pba_register(r->pba);
  on_pba_deregister(std::get<PbaDeregister>(ev).pba);
}

void Mag::on_attachment(const LinkAddr& addr) {
  const InterfaceId id = eui64_from_link_addr(addr);
  const auto it = entries_.find(id);
  std::optional<EntryStatus> status;
  if (it != entries_.end()) {
    status = it->second.status;
    if (it->second.status == EntryStatus::Temporary) {
      anomaly("attach-while-registering", {{"if", id.to_string()}});
      return;
    }
    anomaly("reattach-permanent", {{"if", id.to_string()}});
  }
  if (pending_aaa_.contains(id)) {
    anomaly("attach-while-authorizing", {{"if", id.to_string()}});
    return;
  }
  pending_aaa_[id] = addr;
  ctx_.send(ProtocolMessage::make(MessageKind::AaaRequest, AaaRequestBody{id, addr}, ctx_.self(), config_.aaa));
  transition("attachment", id, status, status, "AaaRequest");
}

void Mag::on_aaa_response(const AaaResponseBody& resp) {
  const auto pending = pending_aaa_.find(resp.interface_id);
  if (pending == pending_aaa_.end()) {
    anomaly("unsolicited-aaa-response", {{"if", resp.interface_id.to_string()}});
    return;
  }
  const LinkAddr addr = pending->second;
  pending_aaa_.erase(pending);

  if (!resp.authorized || resp.hnp.empty()) {
    ++stats_.rejected_attachments;
    ctx_.trace("aaa-denied", {{"if", resp.interface_id.to_string()}, {"mn", resp.mn_id.value}});
    return;
  }

  const auto it = entries_.find(resp.interface_id);
  if (it != entries_.end() && it->second.status == EntryStatus::Permanent) {
    auto& entry = it->second;
    entry.assigned_hnp = resp.hnp;
    entry.advertise_on_ack = true;
    entry.retransmissions_left = config_.pbu_retransmissions;
    send_pbu(entry, lifetime_for(entry.mn_id));
    ++stats_.renewal_pbus;
    transition("aaa-authorized", entry.interface_id, EntryStatus::Permanent, EntryStatus::Permanent, "PBU");
    return;
  }

  MagBindingEntry entry;
  entry.mn_id = resp.mn_id;
  entry.interface_id = resp.interface_id;
  entry.link_addr = addr;
  entry.assigned_hnp = resp.hnp;
  entry.status = EntryStatus::Temporary;
  entry.access_link = config_.access_link;
  auto& stored = entries_[resp.interface_id] = std::move(entry);
  stored.retransmissions_left = config_.pbu_retransmissions;
  send_pbu(stored, lifetime_for(stored.mn_id));
  ++stats_.register_pbus;
  transition("aaa-authorized", stored.interface_id, std::nullopt, EntryStatus::Temporary, "PBU");
  ensure_ticking();
}

void Mag::on_pba_register(const PbaBody& pba) {
  const auto it = entries_.find(pba.interface_id);
  if (it == entries_.end()) {
    anomaly("pba-unknown-entry", {{"if", pba.interface_id.to_string()}, {"seq", std::to_string(pba.sequence)}});
    return;
  }
  auto& entry = it->second;
  if (!entry.awaiting_pba || pba.sequence != entry.pending_sequence) {
    anomaly("stale-pba", {{"if", pba.interface_id.to_string()}, {"seq", std::to_string(pba.sequence)}});
    return;
  }
  entry.awaiting_pba = false;
  const EntryStatus before = entry.status;

  if (pba.status != PbaStatus::Success) {
    const InterfaceId id = entry.interface_id;
    probes_.erase(entry.mn_id);
    entries_.erase(it);
    ctx_.trace("pba-error", {{"if", id.to_string()}, {"status", std::string(to_string(pba.status))}});
    transition("pba-register", id, before, std::nullopt, "");
    return;
  }

  entry.status = EntryStatus::Permanent;
  entry.hnp = pba.hnp.empty() ? entry.assigned_hnp : pba.hnp;
  entry.lifetime_expires_at = ctx_.now() + std::chrono::seconds(pba.lifetime);

  const bool advertise = before == EntryStatus::Temporary || entry.advertise_on_ack;
  entry.advertise_on_ack = false;
  if (before == EntryStatus::Permanent) ++stats_.renewals_confirmed;
  if (advertise) {
    ctx_.send(ProtocolMessage::make(MessageKind::RouterAdvertisement,
                                    RouterAdvertisementBody{entry.link_addr, entry.assigned_hnp}, ctx_.self(),
                                    station(entry.link_addr)));
  }
  transition("pba-register", entry.interface_id, before, EntryStatus::Permanent, advertise ? "RouterAdvertisement" : "");
}

void Mag::on_pba_deregister(const PbaBody& pba) {
  const bool residual = entries_.erase(pba.interface_id) > 0;
  pending_aaa_.erase(pba.interface_id);
  for (auto it = probes_.begin(); it != probes_.end();) {
    if (it->second.interface_id == pba.interface_id)
      it = probes_.erase(it);
    else
      ++it;
  }
  ctx_.trace("pba-deregister", {{"if", pba.interface_id.to_string()},
                                {"status", std::string(to_string(pba.status))},
                                {"residual", residual ? "1" : "0"}});
}

void Mag::on_detachment(const LinkAddr& addr, std::string_view cause) {
  const InterfaceId id = eui64_from_link_addr(addr);
  pending_aaa_.erase(id);
  const auto it = entries_.find(id);
  if (it == entries_.end()) {
    anomaly("detach-unknown", {{"if", id.to_string()}, {"cause", std::string(cause)}});
    return;
  }
  MagBindingEntry entry = std::move(it->second);
  entries_.erase(it);
  probes_.erase(entry.mn_id);
  send_pbu(entry, 0);
  ++stats_.deregister_pbus;
  transition(cause == "link-down" ? "detachment" : cause, id, entry.status, std::nullopt, "PBU");
}

void Mag::on_neighbor_advertisement(const NeighborAdvertisementBody& na) {
  const InterfaceId id = eui64_from_link_addr(na.target);
  const auto it = entries_.find(id);
  if (it == entries_.end()) {
    anomaly("na-unknown-entry", {{"target", na.target.to_string()}});
    return;
  }
  auto& entry = it->second;
  const auto probe = probes_.find(entry.mn_id);
  if (probe == probes_.end() || probe->second.interface_id != id) return;  // unsolicited or late
  probes_.erase(probe);
  entry.retransmissions_left = config_.pbu_retransmissions;
  send_pbu(entry, lifetime_for(entry.mn_id));
  ++stats_.renewal_pbus;
  transition("neighbor-advertisement", id, entry.status, entry.status, "PBU");
}

void Mag::lifetime_tick() {
  const SimTime now = ctx_.now();
  std::vector<InterfaceId> expired;
  for (auto& [id, entry] : entries_) {
    if (entry.status != EntryStatus::Permanent || entry.awaiting_pba) continue;
    if (entry.lifetime_expires_at <= now) {
      expired.push_back(id);
      continue;
    }
    if (entry.lifetime_expires_at - now > config_.renewal_margin) continue;
    if (probes_.contains(entry.mn_id)) continue;
    PendingProbe probe{entry.mn_id, id, entry.link_addr, now, now, config_.probe_retries};
    send_probe(probes_[entry.mn_id] = probe);
  }
  for (const auto& id : expired) {
    const auto it = entries_.find(id);
    probes_.erase(it->second.mn_id);
    ctx_.trace("entry-expired", {{"if", id.to_string()}});
    transition("expiry", id, EntryStatus::Permanent, std::nullopt, "");
    entries_.erase(it);
  }
}

std::optional<NodeId> Mag::forward(Packet pkt, Direction direction) {
  const Cost cost = config_.forward_cost;
  const SimDuration hold = cost.to_duration(config_.cost_unit_us);
  if (direction == Direction::Uplink) {
    ++stats_.forwarded;
    stats_.samples.push_back({ctx_.now(), pkt.selector, pkt.seq, cost, direction});
    ctx_.forward(std::move(pkt), config_.lma, hold);
    return config_.lma;
  }
  for (const auto& [id, entry] : entries_) {
    if (entry.status != EntryStatus::Permanent) continue;
    const bool covered = std::any_of(entry.hnp.begin(), entry.hnp.end(),
                                     [&](const Prefix& p) { return p.contains(pkt.selector.dst_addr); });
    if (!covered) continue;
    ++stats_.forwarded;
    stats_.samples.push_back({ctx_.now(), pkt.selector, pkt.seq, cost, direction});
    if (config_.trace_packets)
      ctx_.trace("mag-forward", {{"sel", pkt.selector.to_string()}, {"seq", std::to_string(pkt.seq)},
                                 {"cost", to_string(cost)}, {"to", entry.link_addr.to_string()}});
    NodeId egress = station(entry.link_addr);
    ctx_.forward(std::move(pkt), egress, hold);
    return egress;
  }
  ++stats_.downlink_drops;
  ctx_.drop(pkt, DropReason::NoMagBinding);
  return std::nullopt;
}

std::uint16_t Mag::lifetime_for(const MnId& mn) const {
  const auto it = config_.lifetime_overrides.find(mn);
  return it == config_.lifetime_overrides.end() ? config_.lifetime_s : it->second;
}

void Mag::send_pbu(MagBindingEntry& entry, std::uint16_t lifetime) {
  const std::uint16_t seq = next_sequence_++;
  entry.pending_sequence = seq;
  entry.awaiting_pba = lifetime != 0;
  ctx_.send(ProtocolMessage::make(MessageKind::Pbu,
                                  PbuBody{entry.mn_id, entry.interface_id, entry.assigned_hnp, lifetime, seq},
                                  ctx_.self(), config_.lma));
  if (lifetime != 0) arm_pba_timer(entry.interface_id, seq);
}

void Mag::arm_pba_timer(const InterfaceId& id, std::uint16_t seq) {
  ctx_.schedule(config_.pba_timeout, [this, id, seq] {
    const auto it = entries_.find(id);
    if (it == entries_.end()) return;
    auto& entry = it->second;
    if (!entry.awaiting_pba || entry.pending_sequence != seq) return;
    if (entry.retransmissions_left > 0) {
      --entry.retransmissions_left;
      ++stats_.retransmitted_pbus;
      send_pbu(entry, lifetime_for(entry.mn_id));
      return;
    }
    entry.awaiting_pba = false;
    if (entry.status == EntryStatus::Temporary) {
      ++stats_.temporary_expired;
      transition("pba-timeout", id, EntryStatus::Temporary, std::nullopt, "");
      entries_.erase(it);
    } else {
      ctx_.trace("renewal-unanswered", {{"if", id.to_string()}});
    }
  });
}

void Mag::send_probe(PendingProbe& probe) {
  probe.solicitation_sent_at = ctx_.now();
  probe.timeout_at = ctx_.now() + config_.probe_timeout;
  ctx_.send(ProtocolMessage::make(MessageKind::NeighborSolicitation, NeighborSolicitationBody{probe.target},
                                  ctx_.self(), station(probe.target)));
  arm_probe_timer(probe.mn_id, probe.timeout_at);
}

void Mag::arm_probe_timer(const MnId& mn, SimTime timeout_at) {
  ctx_.schedule(timeout_at - ctx_.now(), [this, mn, timeout_at] {
    const auto it = probes_.find(mn);
    if (it == probes_.end() || it->second.timeout_at != timeout_at) return;
    if (it->second.retries_left > 0) {
      --it->second.retries_left;
      send_probe(it->second);
      return;
    }
    ++stats_.probe_timeouts;
    const LinkAddr target = it->second.target;
    probes_.erase(it);
    on_detachment(target, "probe-timeout");
  });
}

void Mag::ensure_ticking() {
  if (ticking_) return;
  ticking_ = true;
  ctx_.schedule(config_.tick, [this] {
    ticking_ = false;
    lifetime_tick();
    if (!entries_.empty()) ensure_ticking();
  });
}

void Mag::anomaly(std::string_view reason, TraceFields fields) {
  ++stats_.anomalies;
  fields.insert(fields.begin(), {"reason", std::string(reason)});
  ctx_.trace("anomaly", std::move(fields));
}

void Mag::transition(std::string_view event, const InterfaceId& id, std::optional<EntryStatus> before,
                     std::optional<EntryStatus> after, std::string_view emitted) {
  ctx_.trace("fsm", {{"event", std::string(event)},
                     {"if", id.to_string()},
                     {"before", std::string(status_name(before))},
                     {"after", std::string(status_name(after))},
                     {"emit", emitted.empty() ? "-" : std::string(emitted)}});
}

}  // namespace pmipfm::mag
