#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmipfm/core/context.hpp"
#include "pmipfm/netsim/scenario.hpp"

namespace pmipfm::netsim {

struct StreamEntry {
  TrafficSelector selector;
  std::uint64_t seq = 0;
  SimTime at{};
  std::string iface;
};

/// Multihomed mobile node. Prefixes are learned from router advertisements
/// and kept for the node's lifetime, so traffic for a prefix first learned
/// on one interface is still accepted on another.
class MobileNode {
 public:
  MobileNode(Context& ctx, MnSpec spec);

  /// RA and NS arriving on `iface`.
  void on_message(const ProtocolMessage& msg, const std::string& iface);

  /// Host-model acceptance. Rejected packets are reported as drops.
  bool deliver(const Packet& pkt, const std::string& iface);

  const MnSpec& spec() const { return spec_; }
  const std::set<Prefix>& owned_prefixes() const { return owned_; }
  std::optional<Prefix> assigned(const std::string& iface) const;
  /// Application-layer stream of a logical-interface host; empty for weak hosts.
  const std::vector<StreamEntry>& merged_stream() const { return stream_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

 private:
  Context& ctx_;
  MnSpec spec_;
  std::set<Prefix> owned_;
  std::map<std::string, Prefix> assigned_;
  std::vector<StreamEntry> stream_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace pmipfm::netsim
