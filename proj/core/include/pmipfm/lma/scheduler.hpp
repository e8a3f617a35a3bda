#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "pmipfm/core/types.hpp"
#include "pmipfm/lma/binding_cache.hpp"

namespace pmipfm::lma {

/// Always prefer the first live MAG in `preference`.
struct Pinned {
  std::vector<NodeId> preference;
};

/// Uniform choice among live BCEs, reproducible from `seed`.
struct RandomChoice {
  std::uint64_t seed = 0;
};

/// Hook for an external decision entity. Returning nullopt, or a MAG that is
/// not among the options, falls back to the first option.
using ExternalDecision = std::function<std::optional<NodeId>(
    const MnId&, const TrafficSelector&, std::span<const BceKey>)>;

struct External {
  ExternalDecision decide;
};

using SchedulerPolicy = std::variant<Pinned, RandomChoice, External>;

class FlowScheduler {
 public:
  explicit FlowScheduler(SchedulerPolicy policy);

  /// Picks one of `options` (non-empty, in key order).
  BceKey choose(const MnId& mn, const TrafficSelector& sel, std::span<const BceKey> options);

  const SchedulerPolicy& policy() const { return policy_; }

 private:
  SchedulerPolicy policy_;
  std::mt19937_64 rng_;
};

}  // namespace pmipfm::lma
