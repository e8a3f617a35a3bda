#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmipfm/core/time.hpp"

namespace pmipfm {

/// Identifier of a simulated entity (LMA, MAG, MIHF, Link SAP, MN, CN, AAA).
struct NodeId {
  std::string value;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Identifier of a link or tunnel.
struct LinkId {
  std::string value;
  friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

/// Network Access Identifier of a mobile node ("user@realm").
struct MnId {
  std::string value;
  bool empty() const { return value.empty(); }
  friend auto operator<=>(const MnId&, const MnId&) = default;
};

/// 48-bit link-layer address.
struct LinkAddr {
  std::array<std::uint8_t, 6> bytes{};

  /// Parses "00:11:22:33:44:55". Throws std::invalid_argument.
  static LinkAddr parse(std::string_view text);
  std::string to_string() const;
  friend auto operator<=>(const LinkAddr&, const LinkAddr&) = default;
};

/// 64-bit interface identifier (modified EUI-64).
struct InterfaceId {
  std::array<std::uint8_t, 8> bytes{};

  std::string to_string() const;
  friend auto operator<=>(const InterfaceId&, const InterfaceId&) = default;
};

/// Modified EUI-64 expansion: 0xFFFE inserted between octets 3 and 4, and
/// the universal/local bit of octet 0 flipped.
InterfaceId eui64_from_link_addr(const LinkAddr& addr);

struct Ipv6Address {
  std::array<std::uint8_t, 16> bytes{};

  /// Parses textual IPv6. Throws std::invalid_argument.
  static Ipv6Address parse(std::string_view text);
  std::string to_string() const;
  friend auto operator<=>(const Ipv6Address&, const Ipv6Address&) = default;
};

/// IPv6 prefix. Address bits beyond `length` are always zero.
struct Prefix {
  Ipv6Address address;
  std::uint8_t length = 0;

  /// Builds a canonical prefix, masking host bits. Throws std::invalid_argument
  /// when length > 128.
  static Prefix make(const Ipv6Address& addr, unsigned length);
  /// Parses "2001:db8::/64"; rejects non-canonical input (host bits set).
  static Prefix parse(std::string_view text);

  bool is_canonical() const;
  bool contains(const Ipv6Address& addr) const;
  bool overlaps(const Prefix& other) const;
  /// Address inside this prefix with the low 64 bits replaced by `host`.
  Ipv6Address host(std::uint64_t host) const;
  std::string to_string() const;
  friend auto operator<=>(const Prefix&, const Prefix&) = default;
};

/// The 6-tuple identifying a flow. Equality covers all six fields, the flow
/// label included even when zero.
struct TrafficSelector {
  Ipv6Address src_addr;
  Ipv6Address dst_addr;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t protocol = 0;
  std::uint32_t flow_label = 0;  // 20 significant bits

  std::string to_string() const;
  friend auto operator<=>(const TrafficSelector&, const TrafficSelector&) = default;
};

struct PathHop {
  NodeId node;
  SimTime at;
  friend bool operator==(const PathHop&, const PathHop&) = default;
};

struct Packet {
  TrafficSelector selector;
  std::uint32_t size = 0;
  std::uint64_t seq = 0;
  SimTime created_at{};
  std::vector<PathHop> path_trace;

  void record_hop(const NodeId& node, SimTime at) { path_trace.push_back({node, at}); }
};

enum class DropReason : std::uint8_t {
  LinkDown,
  Unroutable,
  FlowDropped,
  NoMagBinding,
  ForeignPrefix,
  WirelessLoss,
  Horizon,
};

std::string_view to_string(DropReason reason);

std::size_t hash_bytes(const std::uint8_t* data, std::size_t n, std::size_t seed = 0);

}  // namespace pmipfm

template <>
struct std::hash<pmipfm::NodeId> {
  std::size_t operator()(const pmipfm::NodeId& n) const noexcept {
    return std::hash<std::string>{}(n.value);
  }
};

template <>
struct std::hash<pmipfm::MnId> {
  std::size_t operator()(const pmipfm::MnId& m) const noexcept {
    return std::hash<std::string>{}(m.value);
  }
};

template <>
struct std::hash<pmipfm::Ipv6Address> {
  std::size_t operator()(const pmipfm::Ipv6Address& a) const noexcept {
    return pmipfm::hash_bytes(a.bytes.data(), a.bytes.size());
  }
};

template <>
struct std::hash<pmipfm::TrafficSelector> {
  std::size_t operator()(const pmipfm::TrafficSelector& s) const noexcept;
};
