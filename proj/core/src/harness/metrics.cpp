#include "pmipfm/harness/metrics.hpp"

#include <stdexcept>

#include "pmipfm/harness/handover.hpp"

namespace pmipfm::harness {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  throw std::invalid_argument("column '" + name + "' is not numeric");
}

std::string Table::text(std::size_t row, const std::string& name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  throw std::invalid_argument("column '" + name + "' is not text");
}

MetricSet::MetricSet() {
  add_family("flows", {"flow", "direction", "period_ms", "emitted", "delivered", "dropped", "diverted", "fast_path",
                       "state"});
  add_family("costs", {"time_ms", "entity", "flow", "seq", "path", "cost", "rule_position", "rule_count"});
  add_family("handover", {"flow", "old_path", "new_path", "last_old_ms", "first_new_ms", "period_ms", "estimate_ms",
                          "ground_truth_ms"});
  add_family("signaling", {"kind", "count"});
  add_family("rules", {"time_ms", "rules"});
  add_family("drops", {"flow", "reason", "count"});
}

Table& MetricSet::add_family(const std::string& name, std::vector<std::string> columns) {
  auto& t = families_[name];
  t.columns = std::move(columns);
  t.rows.clear();
  return t;
}

Table& MetricSet::family(const std::string& name) {
  const auto it = families_.find(name);
  if (it == families_.end()) throw std::out_of_range("no metric family '" + name + "'");
  return it->second;
}

const Table& MetricSet::family(const std::string& name) const {
  const auto it = families_.find(name);
  if (it == families_.end()) throw std::out_of_range("no metric family '" + name + "'");
  return it->second;
}

namespace {

std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

MetricSet MetricSet::from_run(const netsim::RunResult& run) {
  MetricSet m;
  std::map<TrafficSelector, std::size_t> index;
  for (std::size_t i = 0; i < run.flows.size(); ++i) index[run.flows[i].selector] = i;
  auto flow_name = [&](const TrafficSelector& sel) -> std::string {
    const auto it = index.find(sel);
    return it == index.end() ? sel.to_string() : run.flows[it->second].id;
  };

  std::vector<std::size_t> diverted(run.flows.size(), 0), fast(run.flows.size(), 0);
  auto& costs = m.family("costs");
  for (const auto& s : run.lma.samples) {
    if (const auto it = index.find(s.selector); it != index.end()) ++(s.fast_path ? fast : diverted)[it->second];
    costs.add({to_ms(s.at), std::string("lma"), flow_name(s.selector), static_cast<std::int64_t>(s.seq),
               std::string(s.fast_path ? "fast" : "divert"), s.cost.as_units(), i64(s.rule_position),
               i64(s.rule_count)});
  }
  for (const auto& [mag, stats] : run.mags) {
    for (const auto& s : stats.samples) {
      costs.add({to_ms(s.at), mag.value, flow_name(s.selector), static_cast<std::int64_t>(s.seq),
                 std::string(s.direction == mag::Direction::Downlink ? "bridge-down" : "bridge-up"), s.cost.as_units(),
                 std::int64_t{0}, std::int64_t{0}});
    }
  }

  auto& flows = m.family("flows");
  auto& handover = m.family("handover");
  for (std::size_t i = 0; i < run.flows.size(); ++i) {
    const auto& f = run.flows[i];
    std::string state = "-";
    if (f.state) state = *f.state == lma::FlowState::Active ? "active" : "dropped";
    flows.add({f.id, std::string(f.direction == netsim::FlowDirection::Downlink ? "downlink" : "uplink"),
               to_ms(f.period), i64(f.emitted), i64(f.delivered), i64(f.dropped), i64(diverted[i]), i64(fast[i]), state});
    try {
      const auto h = measure_handover(run, f.selector);
      handover.add({f.id, h.old_path, h.new_path, h.last_old_ms, h.first_new_ms, h.period_ms, h.estimate_ms,
                    h.ground_truth_ms ? Cell{*h.ground_truth_ms} : Cell{std::string()}});
    } catch (const NoHandoverObserved&) {
    }
  }

  auto& signaling = m.family("signaling");
  for (std::uint8_t k = kMinMessageKind; k <= kMaxMessageKind; ++k) {
    const auto kind = static_cast<MessageKind>(k);
    const auto it = run.messages.find(kind);
    signaling.add({std::string(to_string(kind)), i64(it == run.messages.end() ? 0 : it->second)});
  }

  auto& rules = m.family("rules");
  for (const auto& [at, n] : run.lma.rule_count_history) rules.add({to_ms(at), i64(n)});

  std::map<std::pair<std::size_t, DropReason>, std::size_t> drops;
  for (const auto& d : run.drops) ++drops[{d.flow, d.reason}];
  auto& dt = m.family("drops");
  for (const auto& [key, n] : drops) dt.add({run.flows[key.first].id, std::string(to_string(key.second)), i64(n)});
  return m;
}

}  // namespace pmipfm::harness
