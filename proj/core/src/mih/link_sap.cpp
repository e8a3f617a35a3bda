#include "pmipfm/mih/link_sap.hpp"

namespace pmipfm::mih {

LinkSap::LinkSap(Context& ctx, LinkId link, std::string technology, NodeId mihf)
    : ctx_(ctx), link_(std::move(link)), technology_(std::move(technology)), mihf_(std::move(mihf)) {}

bool LinkSap::attach(const LinkAddr& addr) {
  if (!attached_.insert(addr).second) return false;
  report(addr, LinkEvent::LinkUp);
  return true;
}

bool LinkSap::detach(const LinkAddr& addr) {
  if (attached_.erase(addr) == 0) return false;
  report(addr, LinkEvent::LinkDown);
  return true;
}

void LinkSap::report(const LinkAddr& addr, LinkEvent event) {
  const auto kind = event == LinkEvent::LinkUp ? MessageKind::MihLinkUp : MessageKind::MihLinkDown;
  ctx_.send(ProtocolMessage::make(kind, MihLinkEventBody{link_, addr}, ctx_.self(), mihf_));
}

}  // namespace pmipfm::mih
