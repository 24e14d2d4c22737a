#include "meshsim/sim/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9E3779B97F4A7C15ULL;
  value = (value ^ (value >> 30)) * 0xBF58476D1CE4E5B9ULL;
  value = (value ^ (value >> 27)) * 0x94D049BB133111EBULL;
  return value ^ (value >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw ConfigError("uniform draw with lo > hi (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  if (lo == hi) return lo;
  const double value = lo + (hi - lo) * unit;
  return value < hi ? value : lo;
}

double RandomSource::normal(double mean, double stddev) {
  if (!(stddev >= 0.0)) {
    throw ConfigError("normal draw with negative stddev " + std::to_string(stddev));
  }
  const std::uint64_t word = engine_();
  if (stddev == 0.0) return mean;
  const double u1 = (static_cast<double>(word >> 32) + 1.0) * 0x1.0p-32;  // (0, 1]
  const double u2 = static_cast<double>(word & 0xFFFFFFFFULL) * 0x1.0p-32;  // [0, 1)
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

std::size_t RandomSource::index(std::size_t n) {
  if (n == 0) throw ConfigError("index draw from an empty range");
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const auto i = static_cast<std::size_t>(unit * static_cast<double>(n));
  return i < n ? i : n - 1;
}

RandomSource RandomSource::stream(std::uint64_t stream_id) const {
  return RandomSource(mix_seed(seed_ ^ mix_seed(stream_id + 0x5851F42D4C957F2DULL)));
}

}  // namespace meshsim
