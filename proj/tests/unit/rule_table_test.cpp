#include <gtest/gtest.h>

#include "generators.hpp"
#include "pmipfm/lma/rule_table.hpp"

using namespace pmipfm;
using namespace pmipfm::lma;
using pmipfm::testing::Gen;

TEST(RuleTable, LookupReportsScanPosition) {
  Gen gen(31);
  RuleTable t;
  std::vector<TrafficSelector> sels;
  for (int i = 0; i < 100; ++i) {
    sels.push_back(gen.selector());
    ASSERT_TRUE(t.append(Rule{sels.back(), static_cast<Mark>(i + 1)}));
  }
  for (std::size_t i = 0; i < sels.size(); ++i) {
    const auto hit = t.lookup(sels[i]);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->position, i + 1);
    EXPECT_EQ(hit->mark, i + 1);
    EXPECT_TRUE(hit->selector_rule);
  }
  EXPECT_FALSE(t.lookup(gen.selector()));
}

TEST(RuleTable, AtMostOneRulePerMatch) {
  Gen gen(32);
  RuleTable t;
  const auto s = gen.selector();
  EXPECT_TRUE(t.append(Rule{s, 1}));
  EXPECT_FALSE(t.append(Rule{s, 2}));
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t.remove(RuleMatch{s}));
  EXPECT_FALSE(t.remove(RuleMatch{s}));
}

TEST(RuleTable, PrefixRuleMatchesCoveredDestinations) {
  Gen gen(33);
  RuleTable t;
  const auto p = Prefix::parse("2001:db8:7::/64");
  t.append(Rule{p, 9});
  auto s = gen.selector();
  s.dst_addr = p.host(42);
  const auto hit = t.lookup(s);
  ASSERT_TRUE(hit);
  EXPECT_FALSE(hit->selector_rule);
  EXPECT_EQ(hit->mark, 9u);
}

TEST(RuleTable, RemoveMarkKeepsOrderOfTheRest) {
  Gen gen(34);
  RuleTable t;
  std::vector<TrafficSelector> sels;
  for (int i = 0; i < 10; ++i) {
    sels.push_back(gen.selector());
    t.append(Rule{sels.back(), static_cast<Mark>(i % 2)});
  }
  EXPECT_EQ(t.remove_mark(0), 5u);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(std::get<TrafficSelector>(t.rules()[i].match), sels[2 * i + 1]);
}

TEST(RuleTable, InstallLatencyIsAffineInSize) {
  Gen gen(35);
  RuleTable t;
  for (int n = 0; n <= 1000; ++n) {
    // L(n) = 25 + 0.05 n, computed independently in micro-units.
    const std::int64_t expected = 25'000'000 + 50'000 * n;
    ASSERT_EQ(t.install_latency().raw(), expected) << n;
    t.append(Rule{gen.selector(), 1});
  }
  EXPECT_EQ(t.install_latency(), Cost::units(75.05));
}
