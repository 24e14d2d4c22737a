#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace meshsim {

/// Seeded pseudo-random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard;
/// the value transforms below are hand-written so that draws do not depend on
/// the standard library's distribution implementations. Every draw consumes
/// exactly one 64-bit engine step.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Value in [lo, hi); returns lo when lo == hi. Throws ConfigError if lo > hi.
  double uniform(double lo, double hi);

  /// Box-Muller from the two 32-bit halves of one engine step.
  double normal(double mean, double stddev);

  /// Uniform index in [0, n). Throws ConfigError for n == 0.
  std::size_t index(std::size_t n);

  /// Independent child stream. The derivation depends only on this source's
  /// seed and `stream_id`, never on how many draws have been made.
  RandomSource stream(std::uint64_t stream_id) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t value);

}  // namespace meshsim
