#include "pmipfm/lma/rule_table.hpp"

#include <algorithm>

namespace pmipfm::lma {

std::optional<RuleHit> RuleTable::lookup(const TrafficSelector& sel) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& rule = rules_[i];
    if (const auto* s = std::get_if<TrafficSelector>(&rule.match)) {
      if (*s == sel) return RuleHit{i + 1, rule.mark, true};
    } else if (std::get<Prefix>(rule.match).contains(sel.dst_addr)) {
      return RuleHit{i + 1, rule.mark, false};
    }
  }
  return std::nullopt;
}

bool RuleTable::append(Rule rule) {
  if (contains(rule.match)) return false;
  rules_.push_back(std::move(rule));
  return true;
}

bool RuleTable::remove(const RuleMatch& match) {
  const auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.match == match; });
  if (it == rules_.end()) return false;
  rules_.erase(it);
  return true;
}

std::size_t RuleTable::remove_mark(Mark mark) {
  return std::erase_if(rules_, [mark](const Rule& r) { return r.mark == mark; });
}

bool RuleTable::contains(const RuleMatch& match) const {
  return std::any_of(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.match == match; });
}

}  // namespace pmipfm::lma
