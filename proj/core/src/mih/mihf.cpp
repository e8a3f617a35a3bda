#include "pmipfm/mih/mihf.hpp"

namespace pmipfm::mih {

Mihf::Mihf(Context& ctx, std::vector<LinkRegistration> links) : ctx_(ctx) {
  for (auto& reg : links) {
    const LinkId id = reg.link;
    state_.link_registry.emplace(id, std::move(reg));
  }
}

void Mihf::on_message(const ProtocolMessage& msg) {
  switch (msg.kind) {
    case MessageKind::MihRegister: handle_register(msg); break;
    case MessageKind::MihCapabilityDiscoverReq: handle_capability_discover(msg); break;
    case MessageKind::MihEventSubscribeReq: handle_subscribe(msg); break;
    case MessageKind::MihLinkUp:
    case MessageKind::MihLinkDown: handle_link_event(msg); break;
    default:
      ctx_.trace("anomaly", {{"reason", "unexpected-message"}, {"kind", std::string(to_string(msg.kind))}});
  }
}

void Mihf::reply(const ProtocolMessage& to, MessageKind kind, MessageBody body) {
  ctx_.send(ProtocolMessage::make(kind, std::move(body), ctx_.self(), to.src));
}

void Mihf::handle_register(const ProtocolMessage& msg) {
  state_.registered_clients.insert(msg.as<MihRegisterBody>().client);
  // The acknowledgment is optional in 802.21; always sent here.
  reply(msg, MessageKind::MihRegisterAck, MihRegisterAckBody{true});
}

void Mihf::handle_capability_discover(const ProtocolMessage& msg) {
  MihCapabilityDiscoverRespBody resp;
  if (state_.registered_clients.contains(msg.src)) {
    for (const auto& [id, reg] : state_.link_registry)
      resp.links.push_back(MihLinkCapability{id, reg.technology, kLinkUpDownMask});
  }
  reply(msg, MessageKind::MihCapabilityDiscoverResp, std::move(resp));
}

void Mihf::handle_subscribe(const ProtocolMessage& msg) {
  const auto& req = msg.as<MihEventSubscribeReqBody>();
  const bool ok = state_.registered_clients.contains(msg.src) && state_.link_registry.contains(req.link);
  const std::uint8_t mask = req.event_mask & kLinkUpDownMask;
  if (ok) state_.subscriptions[req.link][msg.src] |= mask;
  // One confirmation per requested event kind.
  for (LinkEvent ev : {LinkEvent::LinkUp, LinkEvent::LinkDown}) {
    if ((mask & static_cast<std::uint8_t>(ev)) == 0) continue;
    reply(msg, MessageKind::MihEventSubscribeConfirm, MihEventSubscribeConfirmBody{req.link, ev, ok});
  }
}

void Mihf::handle_link_event(const ProtocolMessage& msg) {
  const auto& ev = msg.as<MihLinkEventBody>();
  const auto bit = static_cast<std::uint8_t>(msg.kind == MessageKind::MihLinkUp ? LinkEvent::LinkUp : LinkEvent::LinkDown);
  const auto subs = state_.subscriptions.find(ev.link);
  bool delivered = false;
  if (subs != state_.subscriptions.end()) {
    for (const auto& [client, mask] : subs->second) {
      if ((mask & bit) == 0) continue;
      ctx_.send(ProtocolMessage::make(msg.kind, ev, ctx_.self(), client));
      ++deliveries_;
      delivered = true;
    }
  }
  if (!delivered) ++absorbed_;
}

}  // namespace pmipfm::mih
