#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pmipfm/netsim/simulator.hpp"

namespace pmipfm::harness {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument when the row width differs from columns.
  void add(std::vector<Cell> row);
  /// Index of `name`; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::string text(std::size_t row, const std::string& name) const;
};

/// Named CSV families. A default-constructed set holds the six per-run
/// families (flows, costs, handover, signaling, rules, drops) with headers
/// and no rows.
class MetricSet {
 public:
  MetricSet();

  static MetricSet blank() { return MetricSet(Blank{}); }

  /// Per-run metrics. Handover rows are emitted for every flow whose
  /// delivery path changes; flows without a change are skipped.
  static MetricSet from_run(const netsim::RunResult& run);

  Table& add_family(const std::string& name, std::vector<std::string> columns);
  Table& family(const std::string& name);
  const Table& family(const std::string& name) const;
  bool has(const std::string& name) const { return families_.contains(name); }
  const std::map<std::string, Table>& families() const { return families_; }

 private:
  struct Blank {};
  explicit MetricSet(Blank) {}
  std::map<std::string, Table> families_;
};

}  // namespace pmipfm::harness
