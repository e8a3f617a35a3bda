#include <gtest/gtest.h>

#include "generators.hpp"
#include "pmipfm/harness/handover.hpp"

using namespace pmipfm;
using namespace std::chrono_literals;
using pmipfm::harness::DeliverySample;
using pmipfm::harness::estimate_handover;
using pmipfm::harness::NoHandoverObserved;
using pmipfm::testing::Gen;

TEST(Handover, WorkedExample) {
  // Packets every 20 ms on path A until 1000 ms, then the next on B at 1080 ms.
  std::vector<DeliverySample> d;
  for (int t = 900; t <= 1000; t += 20) d.push_back({at_ms(t), "mag1/if0", static_cast<std::uint64_t>(t / 20)});
  d.push_back({at_ms(1080), "mag2/if1", 54});
  const auto h = estimate_handover(d, 20ms, at_ms(1010));
  EXPECT_DOUBLE_EQ(h.last_old_ms, 1000.0);
  EXPECT_DOUBLE_EQ(h.first_new_ms, 1080.0);
  EXPECT_DOUBLE_EQ(h.estimate_ms, 60.0);
  ASSERT_TRUE(h.ground_truth_ms);
  EXPECT_DOUBLE_EQ(*h.ground_truth_ms, 70.0);
  EXPECT_EQ(h.last_old_seq, 50u);
  EXPECT_EQ(h.first_new_seq, 54u);
  EXPECT_EQ(h.old_path, "mag1/if0");
  EXPECT_EQ(h.new_path, "mag2/if1");
}

TEST(Handover, SinglePathThrows) {
  std::vector<DeliverySample> d{{at_ms(1), "a", 0}, {at_ms(2), "a", 1}};
  EXPECT_THROW(estimate_handover(d, 1ms), NoHandoverObserved);
  EXPECT_THROW(estimate_handover({}, 1ms), NoHandoverObserved);
}

TEST(Handover, GroundTruthAbsentWithoutDisruption) {
  std::vector<DeliverySample> d{{at_ms(1), "a", 0}, {at_ms(5), "b", 1}};
  const auto h = estimate_handover(d, 1ms);
  EXPECT_FALSE(h.ground_truth_ms);
  EXPECT_DOUBLE_EQ(h.estimate_ms, 3.0);
}

// With a CBR flow of period P on the old path and a failure at a uniform
// instant inside the last inter-arrival gap, the estimate lies within one
// period of the ground truth.
TEST(HandoverProperty, EstimateWithinOnePeriod) {
  Gen gen(31);
  for (int c = 0; c < 1000; ++c) {
    const std::int64_t period_us = gen.between(1000, 200000);
    const std::int64_t phase = gen.between(0, period_us - 1);
    const int before = static_cast<int>(gen.between(1, 20));
    std::vector<DeliverySample> d;
    std::uint64_t seq = 0;
    for (int i = 0; i < before; ++i) d.push_back({SimTime{SimDuration{phase + i * period_us}}, "old", seq++});
    const SimTime last_old = d.back().at;
    const SimTime disruption = last_old + SimDuration{gen.between(0, period_us - 1)};
    const SimDuration outage{gen.between(0, 500000)};
    // First packet emitted after the new path is up.
    const SimTime ready = disruption + outage;
    std::int64_t k = (ready - last_old).count() / period_us + 1;
    const SimTime first_new = last_old + SimDuration{k * period_us};
    d.push_back({first_new, "new", seq + static_cast<std::uint64_t>(k - 1)});

    const auto h = estimate_handover(d, SimDuration{period_us}, disruption);
    ASSERT_TRUE(h.ground_truth_ms);
    const double err = std::abs(h.estimate_ms - *h.ground_truth_ms);
    ASSERT_LE(err, to_ms(SimDuration{period_us})) << "case " << c;
    ASSERT_LE(h.estimate_ms, *h.ground_truth_ms);
  }
}
