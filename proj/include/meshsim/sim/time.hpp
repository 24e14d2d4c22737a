#pragma once

#include <cmath>
#include <cstdint>

namespace meshsim {

/// Microseconds since simulation start.
using SimTime = std::int64_t;
/// Microsecond span.
using Duration = std::int64_t;

constexpr Duration microseconds(std::int64_t us) { return us; }
constexpr Duration milliseconds(std::int64_t ms) { return ms * 1000; }
constexpr Duration seconds(std::int64_t s) { return s * 1'000'000; }

/// Converts a (possibly fractional) millisecond value to integer ticks.
inline Duration from_ms(double ms) { return static_cast<Duration>(std::llround(ms * 1000.0)); }
inline double to_ms(Duration us) { return static_cast<double>(us) / 1000.0; }

}  // namespace meshsim
