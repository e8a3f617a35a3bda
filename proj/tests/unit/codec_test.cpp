#include <gtest/gtest.h>

#include "generators.hpp"
#include "pmipfm/core/codec.hpp"

using namespace pmipfm;
using pmipfm::testing::Gen;

namespace {

ProtocolMessage sample_pbu(std::uint16_t lifetime) {
  PbuBody body{MnId{"mn1@lmd"}, eui64_from_link_addr(LinkAddr::parse("00:11:22:33:44:55")),
               {Prefix::parse("2001:db8:1::/64")}, lifetime, 7};
  return ProtocolMessage::make(MessageKind::Pbu, body, NodeId{"mag1"}, NodeId{"lma"}, at_ms(100));
}

}  // namespace

TEST(Codec, PbaSuccessWithZeroLifetimeRoundTrips) {
  PbaBody body{MnId{"mn1@lmd"}, InterfaceId{}, {Prefix::parse("2001:db8:1::/64")}, 0, 3, PbaStatus::Success};
  const auto msg = ProtocolMessage::make(MessageKind::Pba, body, NodeId{"lma"}, NodeId{"mag1"}, at_ms(5));
  EXPECT_EQ(decode(encode(msg)), msg);
}

TEST(Codec, ZeroLifetimeEncodesAsTwoZeroOctets) {
  const auto bytes = encode(sample_pbu(0));
  // The PBU body ends with lifetime (u16) then sequence (u16).
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(bytes[bytes.size() - 4], 0x00);
  EXPECT_EQ(bytes[bytes.size() - 3], 0x00);
  EXPECT_EQ(bytes[bytes.size() - 2], 0x00);
  EXPECT_EQ(bytes[bytes.size() - 1], 0x07);

  const auto live = encode(sample_pbu(300));
  EXPECT_EQ(live[live.size() - 4], 0x01);
  EXPECT_EQ(live[live.size() - 3], 0x2C);
}

TEST(Codec, HeaderLayout) {
  const auto bytes = encode(sample_pbu(300));
  EXPECT_EQ(bytes[0], static_cast<std::uint8_t>(MessageKind::Pbu));
  EXPECT_EQ((std::size_t{bytes[1]} << 8 | bytes[2]), bytes.size() - 3);
  // src is the first body field: u16 length then the characters.
  EXPECT_EQ(bytes[3], 0x00);
  EXPECT_EQ(bytes[4], 0x04);
  EXPECT_EQ(std::string(bytes.begin() + 5, bytes.begin() + 9), "mag1");
}

TEST(Codec, EncodingIsDeterministic) {
  Gen gen(21);
  for (int i = 0; i < 200; ++i) {
    const auto m = gen.message();
    ASSERT_EQ(encode(m), encode(ProtocolMessage(m)));
  }
}

TEST(Codec, EmptyInputIsMalformed) { EXPECT_THROW(decode({}), MalformedMessage); }

TEST(Codec, UnknownKindTagIsMalformed) {
  auto bytes = encode(sample_pbu(300));
  bytes[0] = 0xFF;
  EXPECT_THROW(decode(bytes), MalformedMessage);
  bytes[0] = 0x00;
  EXPECT_THROW(decode(bytes), MalformedMessage);
}

TEST(Codec, BadLengthIsMalformed) {
  auto bytes = encode(sample_pbu(300));
  auto longer = bytes;
  longer[2] = static_cast<std::uint8_t>(longer[2] + 1);
  EXPECT_THROW(decode(longer), MalformedMessage);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decode(trailing), MalformedMessage);
}

TEST(Codec, OutOfDomainFieldIsMalformed) {
  const auto ack = ProtocolMessage::make(MessageKind::MihRegisterAck, MihRegisterAckBody{true}, NodeId{"m"},
                                         NodeId{"c"});
  auto bytes = encode(ack);
  bytes.back() = 2;  // boolean
  EXPECT_THROW(decode(bytes), MalformedMessage);
}

TEST(Codec, EveryTruncationOfEveryKindIsMalformed) {
  Gen gen(22);
  for (std::uint8_t k = kMinMessageKind; k <= kMaxMessageKind; ++k) {
    const auto msg = gen.message(static_cast<MessageKind>(k));
    const auto bytes = encode(msg);
    ASSERT_EQ(decode(bytes), msg);
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      const std::span<const std::uint8_t> cut(bytes.data(), n);
      EXPECT_THROW(decode(cut), MalformedMessage) << to_string(msg.kind) << " cut at " << n;
    }
  }
}

TEST(Codec, RandomMessagesRoundTrip) {
  Gen gen(23);
  for (int i = 0; i < 5000; ++i) {
    const auto m = gen.message();
    ASSERT_EQ(decode(encode(m)), m) << to_string(m.kind) << " " << to_hex(encode(m));
  }
}

TEST(Codec, RandomBytesNeverCrash) {
  Gen gen(24);
  std::size_t accepted = 0;
  for (int i = 0; i < 5000; ++i) {
    std::vector<std::uint8_t> bytes(gen.below(64));
    for (auto& b : bytes) b = gen.byte();
    if (!bytes.empty() && gen.coin()) bytes[0] = static_cast<std::uint8_t>(gen.between(1, 15));
    try {
      const auto m = decode(bytes);
      ++accepted;
      EXPECT_EQ(encode(m), bytes);
    } catch (const MalformedMessage&) {
    }
  }
  SUCCEED() << accepted << " random inputs decoded";
}

TEST(Codec, Hex) {
  const std::vector<std::uint8_t> b{0x00, 0x0a, 0xff};
  EXPECT_EQ(to_hex(b), "000aff");
}

TEST(Message, BodyMustMatchKind) {
  EXPECT_THROW(ProtocolMessage::make(MessageKind::Pba, PbuBody{}), std::invalid_argument);
  EXPECT_TRUE(body_matches_kind(MessageKind::MihLinkDown, MihLinkEventBody{}));
  EXPECT_EQ(message_kind_from_string("PBU"), MessageKind::Pbu);
  EXPECT_EQ(to_string(MessageKind::NeighborSolicitation), "NeighborSolicitation");
}
