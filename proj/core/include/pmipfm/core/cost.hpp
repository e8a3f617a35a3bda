#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <string>

#include "pmipfm/core/time.hpp"

namespace pmipfm {

/// Abstract processing cost. Stored as fixed-point micro-units so that
/// cost arithmetic (sums, differences, per-rule products) is exact.
class Cost {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Cost() = default;

  static Cost units(double u) {
    return Cost{static_cast<std::int64_t>(std::llround(u * static_cast<double>(kScale)))};
  }
  static constexpr Cost from_raw(std::int64_t micro_units) { return Cost{micro_units}; }

  constexpr std::int64_t raw() const { return raw_; }
  double as_units() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

  /// Latency equivalent of this cost given a scale in microseconds per unit.
  SimDuration to_duration(double us_per_unit) const {
    return SimDuration{static_cast<std::int64_t>(std::llround(as_units() * us_per_unit))};
  }

  constexpr Cost& operator+=(Cost o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Cost& operator-=(Cost o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Cost operator+(Cost a, Cost b) { return a += b; }
  friend constexpr Cost operator-(Cost a, Cost b) { return a -= b; }
  friend constexpr Cost operator*(Cost a, std::int64_t n) { return Cost{a.raw_ * n}; }
  friend constexpr Cost operator*(std::int64_t n, Cost a) { return Cost{a.raw_ * n}; }
  friend constexpr auto operator<=>(Cost, Cost) = default;

 private:
  constexpr explicit Cost(std::int64_t raw) : raw_(raw) {}
  std::int64_t raw_ = 0;
};

/// Exact decimal rendering with six fractional digits, e.g. "10.065000".
std::string to_string(Cost c);

}  // namespace pmipfm
