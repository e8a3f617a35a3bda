#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmipfm/core/context.hpp"
#include "pmipfm/core/message.hpp"

namespace pmipfm::mih {

struct LinkRegistration {
  LinkId link;
  std::string technology;
  NodeId sap;
};

struct MihfState {
  std::set<NodeId> registered_clients;
  std::map<LinkId, LinkRegistration> link_registry;
  /// link -> client -> subscribed event mask
  std::map<LinkId, std::map<NodeId, std::uint8_t>> subscriptions;
};

/// Media Independent Handover Function: brokers Link SAP events to the
/// clients that registered and subscribed for them.
class Mihf {
 public:
  Mihf(Context& ctx, std::vector<LinkRegistration> links);

  void on_message(const ProtocolMessage& msg);

  const MihfState& state() const { return state_; }
  std::size_t deliveries() const { return deliveries_; }
  std::size_t absorbed() const { return absorbed_; }

 private:
  void handle_register(const ProtocolMessage& msg);
  void handle_capability_discover(const ProtocolMessage& msg);
  void handle_subscribe(const ProtocolMessage& msg);
  void handle_link_event(const ProtocolMessage& msg);
  void reply(const ProtocolMessage& to, MessageKind kind, MessageBody body);

  Context& ctx_;
  MihfState state_;
  std::size_t deliveries_ = 0;
  std::size_t absorbed_ = 0;
};

}  // namespace pmipfm::mih
