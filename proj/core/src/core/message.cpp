#include "pmipfm/core/message.hpp"

#include <array>
#include <stdexcept>

namespace pmipfm {

namespace {

constexpr std::array<std::string_view, kMaxMessageKind + 1> kNames = {
    "",
    "PBU",
    "PBA",
    "RouterAdvertisement",
    "NeighborSolicitation",
    "NeighborAdvertisement",
    "MihRegister",
    "MihRegisterAck",
    "MihCapabilityDiscoverReq",
    "MihCapabilityDiscoverResp",
    "MihEventSubscribeReq",
    "MihEventSubscribeConfirm",
    "MihLinkUp",
    "MihLinkDown",
    "AaaRequest",
    "AaaResponse",
};

}  // namespace

std::string_view to_string(MessageKind kind) {
  const auto i = static_cast<std::size_t>(kind);
  return i < kNames.size() ? kNames[i] : std::string_view{"?"};
}

std::optional<MessageKind> message_kind_from_string(std::string_view name) {
  for (std::uint8_t i = kMinMessageKind; i <= kMaxMessageKind; ++i)
    if (kNames[i] == name) return static_cast<MessageKind>(i);
  return std::nullopt;
}

std::string_view to_string(PbaStatus status) {
  switch (status) {
    case PbaStatus::Success: return "Success";
    case PbaStatus::ErrorAdminProhibited: return "ErrorAdminProhibited";
    case PbaStatus::ErrorNoResources: return "ErrorNoResources";
  }
  return "?";
}

bool body_matches_kind(MessageKind kind, const MessageBody& body) {
  switch (kind) {
    case MessageKind::Pbu: return std::holds_alternative<PbuBody>(body);
    case MessageKind::Pba: return std::holds_alternative<PbaBody>(body);
    case MessageKind::RouterAdvertisement: return std::holds_alternative<RouterAdvertisementBody>(body);
    case MessageKind::NeighborSolicitation: return std::holds_alternative<NeighborSolicitationBody>(body);
    case MessageKind::NeighborAdvertisement: return std::holds_alternative<NeighborAdvertisementBody>(body);
    case MessageKind::MihRegister: return std::holds_alternative<MihRegisterBody>(body);
    case MessageKind::MihRegisterAck: return std::holds_alternative<MihRegisterAckBody>(body);
    case MessageKind::MihCapabilityDiscoverReq:
      return std::holds_alternative<MihCapabilityDiscoverReqBody>(body);
    case MessageKind::MihCapabilityDiscoverResp:
      return std::holds_alternative<MihCapabilityDiscoverRespBody>(body);
    case MessageKind::MihEventSubscribeReq: return std::holds_alternative<MihEventSubscribeReqBody>(body);
    case MessageKind::MihEventSubscribeConfirm:
      return std::holds_alternative<MihEventSubscribeConfirmBody>(body);
    case MessageKind::MihLinkUp:
    case MessageKind::MihLinkDown: return std::holds_alternative<MihLinkEventBody>(body);
    case MessageKind::AaaRequest: return std::holds_alternative<AaaRequestBody>(body);
    case MessageKind::AaaResponse: return std::holds_alternative<AaaResponseBody>(body);
  }
  return false;
}

ProtocolMessage ProtocolMessage::make(MessageKind kind, MessageBody body, NodeId src, NodeId dst,
                                      SimTime sent_at) {
  if (!body_matches_kind(kind, body))
    throw std::invalid_argument("message body does not match kind " + std::string(to_string(kind)));
  return ProtocolMessage{kind, std::move(body), std::move(src), std::move(dst), sent_at};
}

}  // namespace pmipfm
