#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "pmipfm/netsim/simulator.hpp"

namespace pmipfm::harness {

/// The flow never reached the MN over a second path.
class NoHandoverObserved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DeliverySample {
  SimTime at{};
  /// Identifies the delivery path, e.g. "mag1/if0".
  std::string path;
  std::uint64_t seq = 0;
};

struct HandoverEstimate {
  double last_old_ms = 0.0;
  double first_new_ms = 0.0;
  double period_ms = 0.0;
  /// (first_new - last_old) - period: what a receiver-side probe can see.
  double estimate_ms = 0.0;
  /// first_new - disruption instant; nullopt when no disruption is known.
  std::optional<double> ground_truth_ms;
  std::uint64_t last_old_seq = 0;
  std::uint64_t first_new_seq = 0;
  std::string old_path;
  std::string new_path;
};

/// Estimator over time-ordered deliveries of one flow. The handover is the
/// first change of delivery path. `disruption` is the instant the old path
/// failed, if known. Throws NoHandoverObserved.
HandoverEstimate estimate_handover(std::span<const DeliverySample> deliveries, SimDuration period,
                                   std::optional<SimTime> disruption = std::nullopt);

/// Applies estimate_handover to one flow of a run. The disruption instant is
/// the latest link-down or interface detach at or before the first
/// new-path delivery.
HandoverEstimate measure_handover(const netsim::RunResult& run, const TrafficSelector& flow);

/// "<mag>/<iface>" of a delivery (the hop before the receiver).
std::string delivery_path(const netsim::Delivery& d);

}  // namespace pmipfm::harness
