#include "pmipfm/netsim/mobile_node.hpp"

#include <algorithm>

namespace pmipfm::netsim {

MobileNode::MobileNode(Context& ctx, MnSpec spec) : ctx_(ctx), spec_(std::move(spec)) {}

void MobileNode::on_message(const ProtocolMessage& msg, const std::string& iface) {
  const auto* spec = spec_.find_interface(iface);
  if (spec == nullptr) return;
  switch (msg.kind) {
    case MessageKind::RouterAdvertisement: {
      const auto& ra = msg.as<RouterAdvertisementBody>();
      if (ra.target != spec->addr) return;
      for (const auto& p : ra.hnp) owned_.insert(p);
      if (!ra.hnp.empty()) assigned_[iface] = ra.hnp.front();
      ctx_.trace("ra", {{"iface", iface}, {"hnp", ra.hnp.empty() ? "-" : ra.hnp.front().to_string()}});
      return;
    }
    case MessageKind::NeighborSolicitation: {
      const auto& ns = msg.as<NeighborSolicitationBody>();
      if (ns.target != spec->addr || !spec_.responsive) return;
      ctx_.send(ProtocolMessage::make(MessageKind::NeighborAdvertisement, NeighborAdvertisementBody{spec->addr},
                                      ctx_.self(), msg.src));
      return;
    }
    default: return;
  }
}

bool MobileNode::deliver(const Packet& pkt, const std::string& iface) {
  const bool ours = std::any_of(owned_.begin(), owned_.end(),
                                [&](const Prefix& p) { return p.contains(pkt.selector.dst_addr); });
  if (!ours) {
    ++rejected_;
    ctx_.drop(pkt, DropReason::ForeignPrefix);
    return false;
  }
  ++accepted_;
  if (spec_.host_model == HostModel::LogicalInterface)
    stream_.push_back({pkt.selector, pkt.seq, ctx_.now(), iface});
  return true;
}

std::optional<Prefix> MobileNode::assigned(const std::string& iface) const {
  const auto it = assigned_.find(iface);
  if (it == assigned_.end()) return std::nullopt;
  return it->second;
}

}  // namespace pmipfm::netsim
