#pragma once

#include <cstdint>

namespace tilr {

/// Signed tick count; datasets choose their own tick unit.
using Tick = std::int64_t;

/// Closed interval [start, end]; start == end is a time point.
struct Interval {
  Tick start = 0;
  Tick end = 0;

  constexpr bool valid() const { return start <= end; }
  constexpr Tick duration() const { return end - start; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace tilr
