#include "pmipfm/netsim/event_queue.hpp"

#include <algorithm>

namespace pmipfm::netsim {

namespace {

// std heap algorithms build a max-heap; "later" sorts lower.
bool later(const SimEvent& a, const SimEvent& b) {
  if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
  return a.seq > b.seq;
}

}  // namespace

std::uint64_t EventQueue::push(SimTime fire_at, std::function<void()> action) {
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(SimEvent{fire_at, seq, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), later);
  return seq;
}

SimEvent EventQueue::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), later);
  SimEvent ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

}  // namespace pmipfm::netsim
