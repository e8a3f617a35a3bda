#include "pmipfm/lma/lma.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace pmipfm::lma {

std::string_view to_string(MmmAction action) {
  switch (action) {
    case MmmAction::Register: return "REGISTER";
    case MmmAction::Renew: return "RENEW";
    case MmmAction::Handover: return "HANDOVER";
    case MmmAction::Delete: return "DELETE";
    case MmmAction::Rejected: return "REJECTED";
  }
  return "?";
}

std::vector<UserSpaceQueue::Entry> UserSpaceQueue::take(const TrafficSelector& sel) {
  std::vector<Entry> out;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->packet.selector == sel) {
      out.push_back(std::move(*it));
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::size_t UserSpaceQueue::count(const TrafficSelector& sel) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.packet.selector == sel; }));
}

Lma::Lma(Context& ctx, LmaConfig config, SchedulerPolicy policy)
    : ctx_(ctx),
      config_(std::move(config)),
      scheduler_(std::move(policy)),
      cache_(config_.max_bces),
      rules_(RuleCosts{config_.scan_cost_per_rule, config_.install_cost_base, config_.install_cost_per_rule}) {}

void Lma::on_message(const ProtocolMessage& msg) {
  if (msg.kind != MessageKind::Pbu) {
    ctx_.trace("anomaly", {{"reason", "unexpected-message"}, {"kind", std::string(to_string(msg.kind))}});
    return;
  }
  auto result = mmm_handle_pbu(msg.as<PbuBody>(), msg.src);
  ctx_.send(ProtocolMessage::make(MessageKind::Pba, std::move(result.pba), ctx_.self(), msg.src));
}

PbuResult Lma::mmm_handle_pbu(const PbuBody& pbu, const NodeId& from_mag) {
  const SimTime now = ctx_.now();
  PbaBody pba{pbu.mn_id, pbu.interface_id, pbu.hnp, pbu.lifetime, pbu.sequence, PbaStatus::Success};

  auto finish = [&](MmmAction action, PbaStatus status = PbaStatus::Success) {
    pba.status = status;
    ++stats_.actions[action];
    ctx_.trace("mmm", {{"action", std::string(to_string(action))},
                       {"mn", pbu.mn_id.value},
                       {"if", pbu.interface_id.to_string()},
                       {"mag", from_mag.value},
                       {"lifetime", std::to_string(pbu.lifetime)},
                       {"seq", std::to_string(pbu.sequence)},
                       {"status", std::string(to_string(status))}});
    return PbuResult{action, pba};
  };

  if (config_.denied.contains(pbu.mn_id)) return finish(MmmAction::Rejected, PbaStatus::ErrorAdminProhibited);

  const BceKey here{pbu.mn_id, from_mag};

  if (pbu.lifetime == 0) {
    const auto* entry = cache_.find(here);
    if (entry != nullptr && entry->interface_id == pbu.interface_id) {
      remove_bce(here, "deregistration");
    } else {
      ctx_.trace("mmm-noop", {{"reason", "delete-unknown-bce"}, {"bce", here.to_string()}});
    }
    return finish(MmmAction::Delete);
  }

  const SimTime expires = now + std::chrono::seconds(pbu.lifetime);
  const auto* existing = cache_.find_interface(pbu.mn_id, pbu.interface_id);

  if (existing == nullptr) {
    if (cache_.find(here) != nullptr) {
      // One interface per MN per MAG.
      ctx_.trace("anomaly", {{"reason", "second-interface-on-mag"}, {"bce", here.to_string()}});
      return finish(MmmAction::Rejected, PbaStatus::ErrorAdminProhibited);
    }
    if (cache_.full()) return finish(MmmAction::Rejected, PbaStatus::ErrorNoResources);

    BindingCacheEntry entry{pbu.mn_id, pbu.interface_id, from_mag, pbu.hnp, expires, tunnel_id_for(from_mag),
                            next_mark_++};
    routes_[entry.mark] = from_mag;
    const auto prefixes = entry.hnp;
    cache_.insert(std::move(entry));
    if (!config_.flow_mobility)
      for (const auto& p : prefixes) request_install({p, here, now});
    schedule_expiry(here, expires);
    pba.hnp = cache_.prefixes_for(pbu.mn_id, &here);
    return finish(MmmAction::Register);
  }

  if (existing->serving_mag == from_mag) {
    auto* entry = cache_.find(here);
    entry->lifetime_expires_at = expires;
    if (!pbu.hnp.empty() && pbu.hnp != entry->hnp) {
      ctx_.trace("warning", {{"reason", "renew-with-different-hnp"}, {"bce", here.to_string()}});
      entry->hnp = pbu.hnp;
      if (!config_.flow_mobility) {
        rules_.remove_mark(entry->mark);
        note_rule_count();
        for (const auto& p : entry->hnp) request_install({p, here, now});
      }
    }
    schedule_expiry(here, expires);
    pba.hnp = cache_.prefixes_for(pbu.mn_id, &here);
    return finish(MmmAction::Renew);
  }

  if (cache_.find(here) != nullptr) {
    ctx_.trace("anomaly", {{"reason", "second-interface-on-mag"}, {"bce", here.to_string()}});
    return finish(MmmAction::Rejected, PbaStatus::ErrorAdminProhibited);
  }

  const BceKey old = existing->key();
  auto& moved = cache_.rekey(old, from_mag);
  moved.lifetime_expires_at = expires;
  if (!pbu.hnp.empty()) moved.hnp = pbu.hnp;
  routes_[moved.mark] = from_mag;
  for (auto& [sel, binding] : flows_)
    if (binding.bce_ref == old) binding.bce_ref = here;
  ctx_.trace("route-update", {{"from", old.to_string()}, {"to", here.to_string()}, {"mark", std::to_string(moved.mark)}});
  schedule_expiry(here, expires);
  fsm_reroute(pbu.mn_id);
  pba.hnp = cache_.prefixes_for(pbu.mn_id, &here);
  return finish(MmmAction::Handover);
}

void Lma::remove_bce(const BceKey& key, std::string_view reason) {
  const auto* entry = cache_.find(key);
  if (entry == nullptr) return;
  const Mark mark = entry->mark;
  cache_.erase(key);
  routes_.erase(mark);
  if (rules_.remove_mark(mark) > 0) note_rule_count();
  ctx_.trace("bce-remove", {{"bce", key.to_string()}, {"mark", std::to_string(mark)}, {"reason", std::string(reason)}});
  fsm_reroute(key.mn_id);
}

void Lma::schedule_expiry(const BceKey& key, SimTime expires_at) {
  ctx_.schedule(expires_at - ctx_.now(), [this, key] {
    const auto* entry = cache_.find(key);
    if (entry != nullptr && entry->lifetime_expires_at <= ctx_.now()) {
      ++stats_.actions[MmmAction::Delete];
      remove_bce(key, "lifetime-expired");
    }
  });
}

std::optional<ClassifiedFlow> Lma::fim_classify(const Packet& pkt) {
  ++stats_.classify_calls[pkt.selector];
  const auto owner = cache_.owner_of(pkt.selector.dst_addr);
  if (!owner) {
    ++stats_.unroutable;
    ctx_.trace("fim", {{"sel", pkt.selector.to_string()}, {"result", "unroutable"}});
    return std::nullopt;
  }
  ctx_.trace("fim", {{"sel", pkt.selector.to_string()}, {"mn", owner->value}});
  return ClassifiedFlow{*owner, pkt.selector};
}

BceKey Lma::fsm_schedule(const MnId& mn, const TrafficSelector& sel) {
  const auto keys = cache_.keys_for(mn);
  if (keys.empty()) throw NoPath("no binding cache entry for " + mn.value);
  const BceKey chosen = scheduler_.choose(mn, sel, keys);
  const Mark mark = cache_.find(chosen)->mark;

  if (rules_.remove(RuleMatch{sel})) note_rule_count();
  flows_[sel] = FlowBinding{sel, mn, chosen, mark, FlowState::Active};
  ctx_.trace("fsm-schedule", {{"sel", sel.to_string()}, {"bce", chosen.to_string()}, {"mark", std::to_string(mark)}});
  request_install({sel, std::nullopt, ctx_.now()});
  return chosen;
}

void Lma::fsm_reroute(const MnId& mn) {
  const bool survivors = !cache_.keys_for(mn).empty();
  for (auto& [sel, binding] : flows_) {
    if (binding.mn_id != mn || binding.state == FlowState::Dropped) continue;
    if (cache_.find(binding.bce_ref) != nullptr) continue;
    if (survivors) {
      ctx_.trace("fsm-reroute", {{"sel", sel.to_string()}, {"from", binding.bce_ref.to_string()}});
      fsm_schedule(mn, sel);
    } else {
      binding.state = FlowState::Dropped;
      if (rules_.remove(RuleMatch{sel})) note_rule_count();
      ++stats_.dropped_flows;
      ctx_.trace("flow-dropped", {{"sel", sel.to_string()}, {"bce", binding.bce_ref.to_string()}});
      drop_queued(sel, DropReason::FlowDropped);
    }
  }
}

ForwardOutcome Lma::forward_downlink(Packet pkt) {
  const SimTime now = ctx_.now();
  const std::size_t rule_count = rules_.size();
  const TrafficSelector sel = pkt.selector;

  if (const auto hit = rules_.lookup(sel)) {
    if (const auto route = routes_.find(hit->mark); route != routes_.end()) {
      Cost cost = config_.base_kernel_cost + rules_.scan_cost(hit->position);
      if (hit->selector_rule) cost += config_.selector_match_cost;
      ++stats_.fast_path;
      stats_.samples.push_back({now, sel, pkt.seq, cost, true, hit->position, rule_count});
      trace_packet("fast-path", pkt, cost, hit->position);
      const NodeId mag = route->second;
      emit(std::move(pkt), mag, now + cost.to_duration(config_.cost_unit_us));
      return FastPath{mag, tunnel_id_for(mag), cost, hit->position};
    }
  }

  if (!config_.flow_mobility) {
    ++stats_.unroutable;
    ctx_.drop(pkt, DropReason::Unroutable);
    return Unroutable{};
  }

  const Cost cost = config_.divert_cost;
  ++stats_.diverted;
  stats_.samples.push_back({now, sel, pkt.seq, cost, false, 0, rule_count});
  trace_packet("divert", pkt, cost, 0);

  const auto it = flows_.find(sel);
  if (it == flows_.end()) {
    const auto flow = fim_classify(pkt);
    if (!flow) {
      ctx_.drop(pkt, DropReason::Unroutable);
      return Unroutable{};
    }
    queue_.push(std::move(pkt), now);
    fsm_schedule(flow->mn_id, sel);
    return Diverted{cost};
  }

  const FlowBinding& binding = it->second;
  if (binding.state == FlowState::Dropped) {
    if (cache_.keys_for(binding.mn_id).empty()) {
      ++stats_.flow_dropped_packets;
      ctx_.drop(pkt, DropReason::FlowDropped);
      return Unroutable{};
    }
    queue_.push(std::move(pkt), now);
    fsm_schedule(binding.mn_id, sel);
    return Diverted{cost};
  }

  queue_.push(std::move(pkt), now);
  if (!pending_selectors_.contains(sel)) request_install({sel, std::nullopt, now});
  return Diverted{cost};
}

void Lma::forward_uplink(Packet pkt, const NodeId& next_hop) {
  ctx_.forward(std::move(pkt), next_hop, config_.base_kernel_cost.to_duration(config_.cost_unit_us));
}

void Lma::prefill_rules(std::size_t n) {
  const Ipv6Address filler_dst = Ipv6Address::parse("fd00:ffff::");
  for (std::size_t i = 0; i < n; ++i) {
    TrafficSelector sel;
    sel.src_addr = Prefix::make(Ipv6Address::parse("fd00:fffe::"), 64).host(i + 1);
    sel.dst_addr = filler_dst;
    sel.src_port = 9;
    sel.dst_port = 9;
    sel.protocol = 17;
    rules_.append(Rule{sel, 0});
  }
  note_rule_count();
}

std::optional<NodeId> Lma::route_of(Mark mark) const {
  const auto it = routes_.find(mark);
  if (it == routes_.end()) return std::nullopt;
  return it->second;
}

void Lma::request_install(InstallRequest req) {
  if (const auto* sel = std::get_if<TrafficSelector>(&req.match))
    if (!pending_selectors_.insert(*sel).second) return;
  install_queue_.push_back(std::move(req));
  if (!installing_) start_next_install();
}

void Lma::start_next_install() {
  if (install_queue_.empty()) {
    installing_ = false;
    return;
  }
  installing_ = true;
  InstallRequest req = std::move(install_queue_.front());
  install_queue_.pop_front();
  const std::size_t before = rules_.size();
  const Cost latency = rules_.install_latency();
  const SimTime started = ctx_.now();
  ctx_.schedule(latency.to_duration(config_.install_unit_us),
                [this, req = std::move(req), before, latency, started]() mutable {
                  finish_install(std::move(req), before, latency, started);
                });
}

void Lma::finish_install(InstallRequest req, std::size_t rules_before, Cost latency, SimTime started) {
  InstallRecord record{std::nullopt, rules_before, latency, req.requested, started, ctx_.now()};

  if (const auto* sel = std::get_if<TrafficSelector>(&req.match)) {
    record.selector = *sel;
    pending_selectors_.erase(*sel);
    const auto it = flows_.find(*sel);
    if (it != flows_.end() && it->second.state == FlowState::Active && routes_.contains(it->second.mark)) {
      rules_.append(Rule{*sel, it->second.mark});
      note_rule_count();
      ctx_.trace("rule-install", {{"sel", sel->to_string()},
                                  {"mark", std::to_string(it->second.mark)},
                                  {"n", std::to_string(rules_before)},
                                  {"latency", to_string(latency)}});
      stats_.installs.push_back(record);
      release_queued(*sel);
    } else {
      ctx_.trace("rule-install-abandoned", {{"sel", sel->to_string()}});
    }
  } else {
    const auto& prefix = std::get<Prefix>(req.match);
    const auto* owner = req.prefix_owner ? cache_.find(*req.prefix_owner) : nullptr;
    if (owner != nullptr) {
      rules_.append(Rule{prefix, owner->mark});
      note_rule_count();
      ctx_.trace("rule-install", {{"prefix", prefix.to_string()},
                                  {"mark", std::to_string(owner->mark)},
                                  {"n", std::to_string(rules_before)},
                                  {"latency", to_string(latency)}});
      stats_.installs.push_back(record);
    }
  }
  start_next_install();
}

void Lma::release_queued(const TrafficSelector& sel) {
  auto entries = queue_.take(sel);
  if (entries.empty()) return;
  const NodeId mag = routes_.at(flows_.at(sel).mark);
  const SimTime now = ctx_.now();
  for (auto& e : entries) {
    const SimTime processed = e.arrived + config_.divert_cost.to_duration(config_.cost_unit_us);
    emit(std::move(e.packet), mag, std::max(now, processed));
  }
}

void Lma::drop_queued(const TrafficSelector& sel, DropReason reason) {
  for (auto& e : queue_.take(sel)) {
    ++stats_.flow_dropped_packets;
    ctx_.drop(e.packet, reason);
  }
}

void Lma::emit(Packet pkt, const NodeId& mag, SimTime ready_at) {
  auto& last = last_egress_[pkt.selector];
  ready_at = std::max(ready_at, last);
  last = ready_at;
  ctx_.forward(std::move(pkt), mag, ready_at - ctx_.now());
}

void Lma::note_rule_count() { stats_.rule_count_history.emplace_back(ctx_.now(), rules_.size()); }

void Lma::trace_packet(std::string_view kind, const Packet& pkt, Cost cost, std::size_t position) {
  if (!config_.trace_packets) return;
  ctx_.trace(std::string(kind), {{"sel", pkt.selector.to_string()},
                                 {"seq", std::to_string(pkt.seq)},
                                 {"cost", to_string(cost)},
                                 {"pos", std::to_string(position)}});
}

}  // namespace pmipfm::lma
