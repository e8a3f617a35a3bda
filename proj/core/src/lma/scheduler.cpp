#include "pmipfm/lma/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmipfm::lma {

namespace {

std::uint64_t seed_of(const SchedulerPolicy& policy) {
  if (const auto* r = std::get_if<RandomChoice>(&policy)) return r->seed;
  return 0;
}

}  // namespace

FlowScheduler::FlowScheduler(SchedulerPolicy policy) : policy_(std::move(policy)), rng_(seed_of(policy_)) {}

BceKey FlowScheduler::choose(const MnId& mn, const TrafficSelector& sel, std::span<const BceKey> options) {
  if (options.empty()) throw std::invalid_argument("scheduler called without options");
  if (options.size() == 1) return options.front();

  auto by_mag = [&](const NodeId& mag) -> const BceKey* {
    const auto it = std::find_if(options.begin(), options.end(), [&](const BceKey& k) { return k.serving_mag == mag; });
    return it == options.end() ? nullptr : &*it;
  };

  if (const auto* pinned = std::get_if<Pinned>(&policy_)) {
    for (const auto& mag : pinned->preference)
      if (const auto* k = by_mag(mag)) return *k;
    return options.front();
  }
  if (std::holds_alternative<RandomChoice>(policy_)) {
    // Plain modulo keeps the choice sequence identical across standard libraries.
    return options[static_cast<std::size_t>(rng_() % options.size())];
  }
  const auto& ext = std::get<External>(policy_);
  if (ext.decide) {
    if (const auto mag = ext.decide(mn, sel, options))
      if (const auto* k = by_mag(*mag)) return *k;
  }
  return options.front();
}

}  // namespace pmipfm::lma
