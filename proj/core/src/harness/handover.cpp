#include "pmipfm/harness/handover.hpp"

#include <vector>

namespace pmipfm::harness {

std::string delivery_path(const netsim::Delivery& d) {
  const std::string via = d.path.size() >= 2 ? d.path[d.path.size() - 2].node.value : "-";
  return via + "/" + (d.iface.empty() ? "-" : d.iface);
}

HandoverEstimate estimate_handover(std::span<const DeliverySample> deliveries, SimDuration period,
                                   std::optional<SimTime> disruption) {
  if (deliveries.empty()) throw NoHandoverObserved("flow has no deliveries");
  for (std::size_t i = 1; i < deliveries.size(); ++i) {
    if (deliveries[i].path == deliveries[i - 1].path) continue;
    const auto& last_old = deliveries[i - 1];
    const auto& first_new = deliveries[i];
    HandoverEstimate h;
    h.last_old_ms = to_ms(last_old.at);
    h.first_new_ms = to_ms(first_new.at);
    h.period_ms = to_ms(period);
    h.estimate_ms = to_ms((first_new.at - last_old.at) - period);
    if (disruption) h.ground_truth_ms = to_ms(first_new.at - *disruption);
    h.last_old_seq = last_old.seq;
    h.first_new_seq = first_new.seq;
    h.old_path = last_old.path;
    h.new_path = first_new.path;
    return h;
  }
  throw NoHandoverObserved("flow never resumed on a new path");
}

HandoverEstimate measure_handover(const netsim::RunResult& run, const TrafficSelector& flow) {
  std::size_t idx = run.flows.size();
  for (std::size_t i = 0; i < run.flows.size(); ++i)
    if (run.flows[i].selector == flow) idx = i;
  if (idx == run.flows.size()) throw NoHandoverObserved("unknown flow " + flow.to_string());

  std::vector<DeliverySample> samples;
  for (const auto& d : run.deliveries)
    if (d.flow == idx) samples.push_back({d.at, delivery_path(d), d.seq});

  // Find the switch first, then the disruption that preceded it.
  auto h = estimate_handover(samples, run.flows[idx].period);
  const SimTime first_new = kSimEpoch + from_ms(h.first_new_ms);
  std::optional<SimTime> disruption;
  for (const auto& ev : run.link_events)
    if (!ev.up && ev.at <= first_new) disruption = ev.at;
  if (disruption) h.ground_truth_ms = to_ms(first_new - *disruption);
  return h;
}

}  // namespace pmipfm::harness
