#include "pmipfm/core/codec.hpp"

#include <limits>
#include <type_traits>

namespace pmipfm {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void i64(std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    u32(static_cast<std::uint32_t>(u >> 32));
    u32(static_cast<std::uint32_t>(u));
  }
  void boolean(bool b) { u8(b ? 1 : 0); }
  template <std::size_t N>
  void raw(const std::array<std::uint8_t, N>& a) {
    out_.insert(out_.end(), a.begin(), a.end());
  }
  void str(const std::string& s) {
    u16(static_cast<std::uint16_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void prefix(const Prefix& p) {
    raw(p.address.bytes);
    u8(p.length);
  }
  void prefixes(const std::vector<Prefix>& ps) {
    u16(static_cast<std::uint16_t>(ps.size()));
    for (const auto& p : ps) prefix(p);
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }
  std::int64_t i64() {
    const std::uint64_t hi = u32();
    return static_cast<std::int64_t>((hi << 32) | u32());
  }
  bool boolean() {
    const auto v = u8();
    if (v > 1) throw MalformedMessage("boolean field out of range");
    return v == 1;
  }
  template <std::size_t N>
  std::array<std::uint8_t, N> raw() {
    need(N);
    std::array<std::uint8_t, N> a{};
    for (std::size_t i = 0; i < N; ++i) a[i] = in_[pos_ + i];
    pos_ += N;
    return a;
  }
  std::string str() {
    const std::size_t n = u16();
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  Prefix prefix() {
    Prefix p{Ipv6Address{raw<16>()}, u8()};
    if (!p.is_canonical()) throw MalformedMessage("non-canonical prefix");
    return p;
  }
  std::vector<Prefix> prefixes() {
    const std::size_t n = u16();
    std::vector<Prefix> ps;
    ps.reserve(std::min<std::size_t>(n, remaining() / 17));
    for (std::size_t i = 0; i < n; ++i) ps.push_back(prefix());
    return ps;
  }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw MalformedMessage("truncated message");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void write_body(Writer& w, const MessageBody& body) {
  std::visit(Overloaded{
                 [&](const PbuBody& b) {
                   w.str(b.mn_id.value);
                   w.raw(b.interface_id.bytes);
                   w.prefixes(b.hnp);
                   w.u16(b.lifetime);
                   w.u16(b.sequence);
                 },
                 [&](const PbaBody& b) {
                   w.str(b.mn_id.value);
                   w.raw(b.interface_id.bytes);
                   w.prefixes(b.hnp);
                   w.u16(b.lifetime);
                   w.u16(b.sequence);
                   w.u8(static_cast<std::uint8_t>(b.status));
                 },
                 [&](const RouterAdvertisementBody& b) {
                   w.raw(b.target.bytes);
                   w.prefixes(b.hnp);
                 },
                 [&](const NeighborSolicitationBody& b) { w.raw(b.target.bytes); },
                 [&](const NeighborAdvertisementBody& b) { w.raw(b.target.bytes); },
                 [&](const MihRegisterBody& b) { w.str(b.client.value); },
                 [&](const MihRegisterAckBody& b) { w.boolean(b.accepted); },
                 [&](const MihCapabilityDiscoverReqBody&) {},
                 [&](const MihCapabilityDiscoverRespBody& b) {
                   w.u16(static_cast<std::uint16_t>(b.links.size()));
                   for (const auto& l : b.links) {
                     w.str(l.link.value);
                     w.str(l.technology);
                     w.u8(l.event_mask);
                   }
                 },
                 [&](const MihEventSubscribeReqBody& b) {
                   w.str(b.link.value);
                   w.u8(b.event_mask);
                 },
                 [&](const MihEventSubscribeConfirmBody& b) {
                   w.str(b.link.value);
                   w.u8(static_cast<std::uint8_t>(b.event));
                   w.boolean(b.accepted);
                 },
                 [&](const MihLinkEventBody& b) {
                   w.str(b.link.value);
                   w.raw(b.addr.bytes);
                 },
                 [&](const AaaRequestBody& b) {
                   w.raw(b.interface_id.bytes);
                   w.raw(b.link_addr.bytes);
                 },
                 [&](const AaaResponseBody& b) {
                   w.raw(b.interface_id.bytes);
                   w.boolean(b.authorized);
                   w.str(b.mn_id.value);
                   w.prefixes(b.hnp);
                 },
             },
             body);
}

PbaStatus read_status(Reader& r) {
  const auto v = r.u8();
  switch (v) {
    case static_cast<std::uint8_t>(PbaStatus::Success):
    case static_cast<std::uint8_t>(PbaStatus::ErrorAdminProhibited):
    case static_cast<std::uint8_t>(PbaStatus::ErrorNoResources): return static_cast<PbaStatus>(v);
    default: throw MalformedMessage("unknown PBA status");
  }
}

LinkEvent read_link_event(Reader& r) {
  const auto v = r.u8();
  switch (v) {
    case static_cast<std::uint8_t>(LinkEvent::LinkUp):
    case static_cast<std::uint8_t>(LinkEvent::LinkDown):
    case static_cast<std::uint8_t>(LinkEvent::LinkGoingDown): return static_cast<LinkEvent>(v);
    default: throw MalformedMessage("unknown link event");
  }
}

MessageBody read_body(Reader& r, MessageKind kind) {
  switch (kind) {
    case MessageKind::Pbu: {
      PbuBody b;
      b.mn_id.value = r.str();
      b.interface_id.bytes = r.raw<8>();
      b.hnp = r.prefixes();
      b.lifetime = r.u16();
      b.sequence = r.u16();
      return b;
    }
    case MessageKind::Pba: {
      PbaBody b;
      b.mn_id.value = r.str();
      b.interface_id.bytes = r.raw<8>();
      b.hnp = r.prefixes();
      b.lifetime = r.u16();
      b.sequence = r.u16();
      b.status = read_status(r);
      return b;
    }
    case MessageKind::RouterAdvertisement: {
      RouterAdvertisementBody b;
      b.target.bytes = r.raw<6>();
      b.hnp = r.prefixes();
      return b;
    }
    case MessageKind::NeighborSolicitation: return NeighborSolicitationBody{LinkAddr{r.raw<6>()}};
    case MessageKind::NeighborAdvertisement: return NeighborAdvertisementBody{LinkAddr{r.raw<6>()}};
    case MessageKind::MihRegister: return MihRegisterBody{NodeId{r.str()}};
    case MessageKind::MihRegisterAck: return MihRegisterAckBody{r.boolean()};
    case MessageKind::MihCapabilityDiscoverReq: return MihCapabilityDiscoverReqBody{};
    case MessageKind::MihCapabilityDiscoverResp: {
      MihCapabilityDiscoverRespBody b;
      const std::size_t n = r.u16();
      for (std::size_t i = 0; i < n; ++i) {
        MihLinkCapability cap;
        cap.link.value = r.str();
        cap.technology = r.str();
        cap.event_mask = r.u8();
        b.links.push_back(std::move(cap));
      }
      return b;
    }
    case MessageKind::MihEventSubscribeReq: {
      MihEventSubscribeReqBody b;
      b.link.value = r.str();
      b.event_mask = r.u8();
      return b;
    }
    case MessageKind::MihEventSubscribeConfirm: {
      MihEventSubscribeConfirmBody b;
      b.link.value = r.str();
      b.event = read_link_event(r);
      b.accepted = r.boolean();
      return b;
    }
    case MessageKind::MihLinkUp:
    case MessageKind::MihLinkDown: {
      MihLinkEventBody b;
      b.link.value = r.str();
      b.addr.bytes = r.raw<6>();
      return b;
    }
    case MessageKind::AaaRequest: {
      AaaRequestBody b;
      b.interface_id.bytes = r.raw<8>();
      b.link_addr.bytes = r.raw<6>();
      return b;
    }
    case MessageKind::AaaResponse: {
      AaaResponseBody b;
      b.interface_id.bytes = r.raw<8>();
      b.authorized = r.boolean();
      b.mn_id.value = r.str();
      b.hnp = r.prefixes();
      return b;
    }
  }
  throw MalformedMessage("unknown kind tag");
}

}  // namespace

std::vector<std::uint8_t> encode(const ProtocolMessage& msg) {
  Writer body;
  body.str(msg.src.value);
  body.str(msg.dst.value);
  body.i64((msg.sent_at - kSimEpoch).count());
  write_body(body, msg.body);
  auto payload = body.take();

  Writer out;
  out.u8(static_cast<std::uint8_t>(msg.kind));
  out.u16(static_cast<std::uint16_t>(payload.size()));
  auto bytes = out.take();
  bytes.insert(bytes.end(), payload.begin(), payload.end());
  return bytes;
}

ProtocolMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 3) throw MalformedMessage("message shorter than header");
  const std::uint8_t tag = bytes[0];
  if (tag < kMinMessageKind || tag > kMaxMessageKind) throw MalformedMessage("unknown kind tag");
  const std::size_t length = (static_cast<std::size_t>(bytes[1]) << 8) | bytes[2];
  if (bytes.size() - 3 != length) throw MalformedMessage("length field does not match payload");

  Reader r(bytes.subspan(3));
  ProtocolMessage msg;
  msg.kind = static_cast<MessageKind>(tag);
  msg.src.value = r.str();
  msg.dst.value = r.str();
  msg.sent_at = kSimEpoch + SimDuration{r.i64()};
  msg.body = read_body(r, msg.kind);
  if (r.remaining() != 0) throw MalformedMessage("trailing bytes after body");
  return msg;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xF];
  }
  return out;
}

}  // namespace pmipfm
