#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmipfm/core/time.hpp"
#include "pmipfm/core/types.hpp"

namespace pmipfm {

/// Wire tag of every control message. Values are stable: they are the first
/// octet of the canonical encoding.
enum class MessageKind : std::uint8_t {
  Pbu = 1,
  Pba = 2,
  RouterAdvertisement = 3,
  NeighborSolicitation = 4,
  NeighborAdvertisement = 5,
  MihRegister = 6,
  MihRegisterAck = 7,
  MihCapabilityDiscoverReq = 8,
  MihCapabilityDiscoverResp = 9,
  MihEventSubscribeReq = 10,
  MihEventSubscribeConfirm = 11,
  MihLinkUp = 12,
  MihLinkDown = 13,
  AaaRequest = 14,
  AaaResponse = 15,
};

inline constexpr std::uint8_t kMinMessageKind = 1;
inline constexpr std::uint8_t kMaxMessageKind = 15;

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> message_kind_from_string(std::string_view name);

/// PBA status codes (numeric values follow the PMIPv6 registry).
enum class PbaStatus : std::uint8_t {
  Success = 0,
  ErrorAdminProhibited = 129,
  ErrorNoResources = 130,
};

std::string_view to_string(PbaStatus status);

/// MIH link events. LinkGoingDown is reserved and never generated.
enum class LinkEvent : std::uint8_t {
  LinkUp = 1,
  LinkDown = 2,
  LinkGoingDown = 4,
};

inline constexpr std::uint8_t kLinkUpDownMask =
    static_cast<std::uint8_t>(LinkEvent::LinkUp) | static_cast<std::uint8_t>(LinkEvent::LinkDown);

struct PbuBody {
  MnId mn_id;
  InterfaceId interface_id;
  std::vector<Prefix> hnp;
  std::uint16_t lifetime = 0;  // seconds; 0 deregisters
  std::uint16_t sequence = 0;
  friend bool operator==(const PbuBody&, const PbuBody&) = default;
};

struct PbaBody {
  MnId mn_id;
  InterfaceId interface_id;
  std::vector<Prefix> hnp;
  std::uint16_t lifetime = 0;
  std::uint16_t sequence = 0;
  PbaStatus status = PbaStatus::Success;
  friend bool operator==(const PbaBody&, const PbaBody&) = default;
};

struct RouterAdvertisementBody {
  LinkAddr target;
  std::vector<Prefix> hnp;
  friend bool operator==(const RouterAdvertisementBody&, const RouterAdvertisementBody&) = default;
};

struct NeighborSolicitationBody {
  LinkAddr target;
  friend bool operator==(const NeighborSolicitationBody&, const NeighborSolicitationBody&) = default;
};

struct NeighborAdvertisementBody {
  LinkAddr target;
  friend bool operator==(const NeighborAdvertisementBody&, const NeighborAdvertisementBody&) = default;
};

struct MihRegisterBody {
  NodeId client;
  friend bool operator==(const MihRegisterBody&, const MihRegisterBody&) = default;
};

struct MihRegisterAckBody {
  bool accepted = true;
  friend bool operator==(const MihRegisterAckBody&, const MihRegisterAckBody&) = default;
};

struct MihCapabilityDiscoverReqBody {
  friend bool operator==(const MihCapabilityDiscoverReqBody&,
                         const MihCapabilityDiscoverReqBody&) = default;
};

struct MihLinkCapability {
  LinkId link;
  std::string technology;
  std::uint8_t event_mask = 0;
  friend bool operator==(const MihLinkCapability&, const MihLinkCapability&) = default;
};

struct MihCapabilityDiscoverRespBody {
  std::vector<MihLinkCapability> links;
  friend bool operator==(const MihCapabilityDiscoverRespBody&,
                         const MihCapabilityDiscoverRespBody&) = default;
};

struct MihEventSubscribeReqBody {
  LinkId link;
  std::uint8_t event_mask = 0;
  friend bool operator==(const MihEventSubscribeReqBody&, const MihEventSubscribeReqBody&) = default;
};

struct MihEventSubscribeConfirmBody {
  LinkId link;
  LinkEvent event = LinkEvent::LinkUp;
  bool accepted = true;
  friend bool operator==(const MihEventSubscribeConfirmBody&,
                         const MihEventSubscribeConfirmBody&) = default;
};

/// Body of both MihLinkUp and MihLinkDown.
struct MihLinkEventBody {
  LinkId link;
  LinkAddr addr;
  friend bool operator==(const MihLinkEventBody&, const MihLinkEventBody&) = default;
};

struct AaaRequestBody {
  InterfaceId interface_id;
  LinkAddr link_addr;
  friend bool operator==(const AaaRequestBody&, const AaaRequestBody&) = default;
};

struct AaaResponseBody {
  InterfaceId interface_id;
  bool authorized = false;
  MnId mn_id;
  std::vector<Prefix> hnp;
  friend bool operator==(const AaaResponseBody&, const AaaResponseBody&) = default;
};

using MessageBody =
    std::variant<PbuBody, PbaBody, RouterAdvertisementBody, NeighborSolicitationBody,
                 NeighborAdvertisementBody, MihRegisterBody, MihRegisterAckBody,
                 MihCapabilityDiscoverReqBody, MihCapabilityDiscoverRespBody,
                 MihEventSubscribeReqBody, MihEventSubscribeConfirmBody, MihLinkEventBody,
                 AaaRequestBody, AaaResponseBody>;

/// True when `body` holds the alternative that `kind` requires.
bool body_matches_kind(MessageKind kind, const MessageBody& body);

struct ProtocolMessage {
  MessageKind kind = MessageKind::Pbu;
  MessageBody body;
  NodeId src;
  NodeId dst;
  SimTime sent_at{};

  /// Builds a message, rejecting a body that does not fit the kind.
  static ProtocolMessage make(MessageKind kind, MessageBody body, NodeId src = {}, NodeId dst = {},
                              SimTime sent_at = {});

  template <typename T>
  const T& as() const {
    return std::get<T>(body);
  }

  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

}  // namespace pmipfm
