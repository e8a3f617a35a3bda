#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pmipfm/core/time.hpp"

namespace pmipfm::netsim {

struct SimEvent {
  SimTime fire_at{};
  std::uint64_t seq = 0;
  std::function<void()> action;
};

/// Min-queue ordered by (fire_at, seq). seq is assigned at insertion, so
/// events scheduled for the same instant fire in insertion order.
class EventQueue {
 public:
  std::uint64_t push(SimTime fire_at, std::function<void()> action);
  /// Removes and returns the earliest event. Precondition: !empty().
  SimEvent pop();
  const SimEvent& top() const { return heap_.front(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  void clear() { heap_.clear(); }

 private:
  std::vector<SimEvent> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace pmipfm::netsim
