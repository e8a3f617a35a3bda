#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "pmipfm/core/cost.hpp"
#include "pmipfm/core/types.hpp"
#include "pmipfm/lma/binding_cache.hpp"

namespace pmipfm::lma {

/// A rule matches either one exact 6-tuple (per-flow routing) or a
/// destination prefix (per-MN routing when flow mobility is off).
using RuleMatch = std::variant<TrafficSelector, Prefix>;

struct Rule {
  RuleMatch match;
  Mark mark = 0;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleHit {
  std::size_t position = 0;  // 1-based; equals the number of rules scanned
  Mark mark = 0;
  bool selector_rule = true;
};

struct RuleCosts {
  Cost scan_cost_per_rule = Cost::units(0.065);
  Cost install_cost_base = Cost::units(25);
  Cost install_cost_per_rule = Cost::units(0.05);
};

/// Ordered packet-marking rules, scanned linearly in insertion order.
class RuleTable {
 public:
  explicit RuleTable(RuleCosts costs = {}) : costs_(costs) {}

  std::optional<RuleHit> lookup(const TrafficSelector& sel) const;

  /// Appends at the end. Returns false if a rule with the same match exists.
  bool append(Rule rule);
  bool remove(const RuleMatch& match);
  std::size_t remove_mark(Mark mark);
  bool contains(const RuleMatch& match) const;

  /// Install latency of the next rule: base + n * per_rule, n = size().
  Cost install_latency() const {
    return costs_.install_cost_base + costs_.install_cost_per_rule * static_cast<std::int64_t>(size());
  }
  Cost scan_cost(std::size_t position) const {
    return costs_.scan_cost_per_rule * static_cast<std::int64_t>(position);
  }

  const RuleCosts& costs() const { return costs_; }
  std::size_t size() const { return rules_.size(); }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  RuleCosts costs_;
  std::vector<Rule> rules_;
};

}  // namespace pmipfm::lma
