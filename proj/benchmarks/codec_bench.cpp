#include <benchmark/benchmark.h>

#include "pmipfm/core/codec.hpp"

using namespace pmipfm;

namespace {

ProtocolMessage sample_pbu() {
  PbuBody body;
  body.mn_id = MnId{"mn1@lmd"};
  body.interface_id = eui64_from_link_addr(LinkAddr::parse("02:00:00:00:00:01"));
  body.hnp = {Prefix::parse("2001:db8:1::/64"), Prefix::parse("2001:db8:2::/64")};
  body.lifetime = 300;
  body.sequence = 7;
  return ProtocolMessage::make(MessageKind::Pbu, body, NodeId{"mag1"}, NodeId{"lma"});
}

void BM_EncodePbu(benchmark::State& state) {
  const auto msg = sample_pbu();
  for (auto _ : state) benchmark::DoNotOptimize(encode(msg));
}
BENCHMARK(BM_EncodePbu);

void BM_DecodePbu(benchmark::State& state) {
  const auto bytes = encode(sample_pbu());
  for (auto _ : state) benchmark::DoNotOptimize(decode(bytes));
}
BENCHMARK(BM_DecodePbu);

}  // namespace
