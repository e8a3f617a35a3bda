#include <gtest/gtest.h>

#include "fake_context.hpp"
#include "pmipfm/netsim/mobile_node.hpp"

using namespace pmipfm;
using pmipfm::netsim::HostModel;
using pmipfm::netsim::MnSpec;
using pmipfm::netsim::MobileNode;
using pmipfm::testing::FakeContext;

namespace {

MnSpec two_interfaces(HostModel model) {
  MnSpec s;
  s.id = NodeId{"mn1"};
  s.nai = MnId{"mn1@lmd"};
  s.host_model = model;
  s.interfaces.push_back({"wlan0", LinkAddr::parse("02:00:00:00:00:01"), Prefix::parse("2001:db8:1::/64")});
  s.interfaces.push_back({"lte0", LinkAddr::parse("02:00:00:00:00:02"), Prefix::parse("2001:db8:2::/64")});
  return s;
}

void advertise(MobileNode& mn, const std::string& iface, const std::string& addr, const std::string& prefix) {
  mn.on_message(ProtocolMessage::make(MessageKind::RouterAdvertisement,
                                      RouterAdvertisementBody{LinkAddr::parse(addr), {Prefix::parse(prefix)}}),
                iface);
}

Packet to(const std::string& addr, std::uint64_t seq = 0) {
  Packet p;
  p.selector.src_addr = Ipv6Address::parse("2001:db8:ffff::1");
  p.selector.dst_addr = Ipv6Address::parse(addr);
  p.seq = seq;
  return p;
}

}  // namespace

TEST(MobileNode, WeakHostAcceptsOwnPrefixOnOtherInterface) {
  FakeContext ctx("mn1");
  MobileNode mn(ctx, two_interfaces(HostModel::WeakHost));
  advertise(mn, "wlan0", "02:00:00:00:00:01", "2001:db8:1::/64");
  advertise(mn, "lte0", "02:00:00:00:00:02", "2001:db8:2::/64");
  EXPECT_TRUE(mn.deliver(to("2001:db8:1::5"), "lte0"));
  EXPECT_TRUE(mn.deliver(to("2001:db8:2::5"), "wlan0"));
  EXPECT_EQ(mn.accepted(), 2u);
  EXPECT_TRUE(mn.merged_stream().empty());
}

TEST(MobileNode, ForeignPrefixIsDropped) {
  FakeContext ctx("mn1");
  MobileNode mn(ctx, two_interfaces(HostModel::WeakHost));
  advertise(mn, "wlan0", "02:00:00:00:00:01", "2001:db8:1::/64");
  EXPECT_FALSE(mn.deliver(to("2001:db8:99::5"), "wlan0"));
  // Not yet advertised to this node either.
  EXPECT_FALSE(mn.deliver(to("2001:db8:2::5"), "lte0"));
  ASSERT_EQ(ctx.drops.size(), 2u);
  EXPECT_EQ(ctx.drops[0].reason, DropReason::ForeignPrefix);
  EXPECT_EQ(mn.rejected(), 2u);
}

TEST(MobileNode, RaForAnotherStationIsIgnored) {
  FakeContext ctx("mn1");
  MobileNode mn(ctx, two_interfaces(HostModel::WeakHost));
  advertise(mn, "wlan0", "02:00:00:00:00:09", "2001:db8:1::/64");
  EXPECT_TRUE(mn.owned_prefixes().empty());
  EXPECT_FALSE(mn.assigned("wlan0"));
}

TEST(MobileNode, LogicalInterfaceMergesStreams) {
  FakeContext ctx("mn1");
  MobileNode mn(ctx, two_interfaces(HostModel::LogicalInterface));
  advertise(mn, "wlan0", "02:00:00:00:00:01", "2001:db8:1::/64");
  advertise(mn, "lte0", "02:00:00:00:00:02", "2001:db8:2::/64");
  mn.deliver(to("2001:db8:1::5", 1), "wlan0");
  ctx.advance(std::chrono::milliseconds(1));
  mn.deliver(to("2001:db8:1::5", 2), "lte0");
  const auto& s = mn.merged_stream();
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].seq, 1u);
  EXPECT_EQ(s[0].iface, "wlan0");
  EXPECT_EQ(s[1].seq, 2u);
  EXPECT_EQ(s[1].iface, "lte0");
  EXPECT_EQ(s[1].selector, s[0].selector);
}

TEST(MobileNode, AnswersSolicitationUnlessSilent) {
  FakeContext ctx("mn1");
  MobileNode mn(ctx, two_interfaces(HostModel::WeakHost));
  const auto ns = ProtocolMessage::make(MessageKind::NeighborSolicitation,
                                        NeighborSolicitationBody{LinkAddr::parse("02:00:00:00:00:01")}, NodeId{"mag1"});
  mn.on_message(ns, "wlan0");
  ASSERT_EQ(ctx.sent.size(), 1u);
  EXPECT_EQ(ctx.sent[0].kind, MessageKind::NeighborAdvertisement);
  EXPECT_EQ(ctx.sent[0].dst.value, "mag1");

  auto spec = two_interfaces(HostModel::WeakHost);
  spec.responsive = false;
  FakeContext quiet_ctx("mn2");
  MobileNode quiet(quiet_ctx, spec);
  quiet.on_message(ns, "wlan0");
  EXPECT_TRUE(quiet_ctx.sent.empty());
}
