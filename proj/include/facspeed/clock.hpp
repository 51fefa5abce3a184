#pragma once

#include <chrono>
#include <cstdint>

namespace facspeed {

/// Nanoseconds since an arbitrary fixed origin, from a monotonic clock.
using Nanos = std::int64_t;

inline Nanos now() noexcept {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

inline double to_seconds(Nanos ns) noexcept { return static_cast<double>(ns) * 1e-9; }

inline Nanos from_seconds(double s) noexcept {
  return static_cast<Nanos>(s * 1e9 + (s >= 0 ? 0.5 : -0.5));
}

}  // namespace facspeed
