#include "pmipfm/core/types.hpp"

#include <arpa/inet.h>

#include <cstdio>
#include <cstring>

namespace pmipfm {

std::string format_ms(SimTime t) {
  const std::int64_t us = (t - kSimEpoch).count();
  const std::int64_t mag = us < 0 ? -us : us;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", us < 0 ? "-" : "",
                static_cast<long long>(mag / 1000), static_cast<long long>(mag % 1000));
  return buf;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

template <std::size_t N>
std::string colon_hex(const std::array<std::uint8_t, N>& bytes) {
  std::string out;
  out.reserve(N * 3);
  char buf[4];
  for (std::size_t i = 0; i < N; ++i) {
    std::snprintf(buf, sizeof buf, i == 0 ? "%02X" : ":%02X", bytes[i]);
    out += buf;
  }
  return out;
}

}  // namespace

LinkAddr LinkAddr::parse(std::string_view text) {
  LinkAddr out;
  if (text.size() != 17) throw std::invalid_argument("bad link-layer address: " + std::string(text));
  for (std::size_t i = 0; i < 6; ++i) {
    const std::size_t at = i * 3;
    const int hi = hex_value(text[at]);
    const int lo = hex_value(text[at + 1]);
    if (hi < 0 || lo < 0 || (i < 5 && text[at + 2] != ':'))
      throw std::invalid_argument("bad link-layer address: " + std::string(text));
    out.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return out;
}

std::string LinkAddr::to_string() const { return colon_hex(bytes); }

std::string InterfaceId::to_string() const { return colon_hex(bytes); }

InterfaceId eui64_from_link_addr(const LinkAddr& addr) {
  const auto& b = addr.bytes;
  return InterfaceId{{static_cast<std::uint8_t>(b[0] ^ 0x02), b[1], b[2], 0xFF, 0xFE, b[3], b[4], b[5]}};
}

Ipv6Address Ipv6Address::parse(std::string_view text) {
  Ipv6Address out;
  const std::string s(text);
  if (inet_pton(AF_INET6, s.c_str(), out.bytes.data()) != 1)
    throw std::invalid_argument("bad IPv6 address: " + s);
  return out;
}

std::string Ipv6Address::to_string() const {
  char buf[INET6_ADDRSTRLEN];
  inet_ntop(AF_INET6, bytes.data(), buf, sizeof buf);
  return buf;
}

namespace {

Ipv6Address mask(const Ipv6Address& addr, unsigned length) {
  Ipv6Address out = addr;
  for (unsigned i = 0; i < 16; ++i) {
    const unsigned bit = i * 8;
    if (bit >= length) {
      out.bytes[i] = 0;
    } else if (bit + 8 > length) {
      out.bytes[i] &= static_cast<std::uint8_t>(0xFF << (8 - (length - bit)));
    }
  }
  return out;
}

}  // namespace

Prefix Prefix::make(const Ipv6Address& addr, unsigned length) {
  if (length > 128) throw std::invalid_argument("prefix length above 128");
  return Prefix{mask(addr, length), static_cast<std::uint8_t>(length)};
}

Prefix Prefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw std::invalid_argument("prefix without length: " + std::string(text));
  const Ipv6Address addr = Ipv6Address::parse(text.substr(0, slash));
  const std::string len_text(text.substr(slash + 1));
  if (len_text.empty() || len_text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad prefix length: " + std::string(text));
  const unsigned long len = std::stoul(len_text);
  if (len > 128) throw std::invalid_argument("prefix length above 128: " + std::string(text));
  Prefix p{addr, static_cast<std::uint8_t>(len)};
  if (!p.is_canonical()) throw std::invalid_argument("prefix has host bits set: " + std::string(text));
  return p;
}

bool Prefix::is_canonical() const { return length <= 128 && mask(address, length) == address; }

bool Prefix::contains(const Ipv6Address& addr) const { return mask(addr, length) == address; }

bool Prefix::overlaps(const Prefix& other) const {
  const unsigned shorter = std::min(length, other.length);
  return mask(address, shorter) == mask(other.address, shorter);
}

Ipv6Address Prefix::host(std::uint64_t host) const {
  Ipv6Address out = address;
  for (int i = 0; i < 8; ++i) out.bytes[15 - i] = static_cast<std::uint8_t>(host >> (8 * i));
  return out;
}

std::string Prefix::to_string() const { return address.to_string() + "/" + std::to_string(length); }

std::string TrafficSelector::to_string() const {
  return "[" + src_addr.to_string() + "]:" + std::to_string(src_port) + "->[" + dst_addr.to_string() +
         "]:" + std::to_string(dst_port) + "/" + std::to_string(protocol) + "/" + std::to_string(flow_label);
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::LinkDown: return "link-down";
    case DropReason::Unroutable: return "unroutable";
    case DropReason::FlowDropped: return "flow-dropped";
    case DropReason::NoMagBinding: return "no-mag-binding";
    case DropReason::ForeignPrefix: return "foreign-prefix";
    case DropReason::WirelessLoss: return "wireless-loss";
    case DropReason::Horizon: return "horizon";
  }
  return "unknown";
}

std::size_t hash_bytes(const std::uint8_t* data, std::size_t n, std::size_t seed) {
  // FNV-1a, 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace pmipfm

std::size_t std::hash<pmipfm::TrafficSelector>::operator()(const pmipfm::TrafficSelector& s) const noexcept {
  std::uint8_t tail[9] = {
      static_cast<std::uint8_t>(s.src_port >> 8),    static_cast<std::uint8_t>(s.src_port),
      static_cast<std::uint8_t>(s.dst_port >> 8),    static_cast<std::uint8_t>(s.dst_port),
      s.protocol,                                    static_cast<std::uint8_t>(s.flow_label >> 24),
      static_cast<std::uint8_t>(s.flow_label >> 16), static_cast<std::uint8_t>(s.flow_label >> 8),
      static_cast<std::uint8_t>(s.flow_label)};
  std::size_t h = pmipfm::hash_bytes(s.src_addr.bytes.data(), 16);
  h = pmipfm::hash_bytes(s.dst_addr.bytes.data(), 16, h);
  return pmipfm::hash_bytes(tail, sizeof tail, h);
}
