#pragma once

#include <functional>
#include <string>

#include "pmipfm/core/message.hpp"
#include "pmipfm/core/time.hpp"
#include "pmipfm/core/trace.hpp"
#include "pmipfm/core/types.hpp"

namespace pmipfm {

/// Runtime services an entity sees. The simulator provides one per entity;
/// unit tests substitute a recording fake. Entities never talk to each other
/// except through send() and forward().
class Context {
 public:
  virtual ~Context() = default;

  virtual const NodeId& self() const = 0;
  virtual SimTime now() const = 0;

  /// Sends a control message to msg.dst. src and sent_at are stamped here.
  virtual void send(ProtocolMessage msg) = 0;

  /// Hands a data packet to the link toward `next_hop` after `hold`.
  virtual void forward(Packet pkt, const NodeId& next_hop, SimDuration hold) = 0;

  /// Reports a packet this entity discarded.
  virtual void drop(const Packet& pkt, DropReason reason) = 0;

  virtual void schedule(SimDuration delay, std::function<void()> action) = 0;

  virtual void trace(std::string kind, TraceFields fields) = 0;
};

}  // namespace pmipfm
