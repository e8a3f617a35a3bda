#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>

namespace pmipfm {

/// Simulated clock. Resolution is one microsecond; nothing here ever reads
/// wall-clock time.
struct SimClock {
  using rep = std::int64_t;
  using period = std::micro;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<SimClock>;
  static constexpr bool is_steady = true;
};

using SimDuration = SimClock::duration;
using SimTime = SimClock::time_point;

inline constexpr SimTime kSimEpoch{};

inline SimDuration from_ms(double ms) {
  return SimDuration{static_cast<std::int64_t>(std::llround(ms * 1000.0))};
}

inline SimTime at_ms(double ms) { return kSimEpoch + from_ms(ms); }

inline double to_ms(SimDuration d) { return static_cast<double>(d.count()) / 1000.0; }

inline double to_ms(SimTime t) { return to_ms(t - kSimEpoch); }

/// Exact "<ms>.<us>" rendering used by trace lines, e.g. 1080.005.
std::string format_ms(SimTime t);

}  // namespace pmipfm
