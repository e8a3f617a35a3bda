#include <benchmark/benchmark.h>

#include "pmipfm/lma/rule_table.hpp"

using namespace pmipfm;
using namespace pmipfm::lma;

namespace {

TrafficSelector selector(std::uint64_t i) {
  TrafficSelector s;
  s.src_addr = Ipv6Address::parse("2001:db8:ffff::1");
  s.dst_addr = Prefix::parse("2001:db8:1::/64").host(i + 1);
  s.src_port = 5000;
  s.dst_port = static_cast<std::uint16_t>(i);
  s.protocol = 17;
  return s;
}

// Lookup of the last rule: a full linear scan.
void BM_LookupLastRule(benchmark::State& state) {
  RuleTable table;
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (std::uint64_t i = 0; i < n; ++i) table.append(Rule{selector(i), 1});
  const auto target = selector(n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(table.lookup(target));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LookupLastRule)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);

void BM_AppendRemove(benchmark::State& state) {
  RuleTable table;
  for (std::uint64_t i = 0; i < 1000; ++i) table.append(Rule{selector(i), 1});
  const auto extra = selector(5000);
  for (auto _ : state) {
    table.append(Rule{extra, 2});
    table.remove(RuleMatch{extra});
  }
}
BENCHMARK(BM_AppendRemove);

}  // namespace
