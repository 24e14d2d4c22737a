#pragma once

#include <cstdint>
#include <vector>

#include "meshsim/harness/experiment.hpp"

namespace meshsim {

enum class LatencyMetric : std::uint8_t { one_way, round_trip };

const char* to_string(LatencyMetric metric);

struct SeedRecords {
  std::uint64_t seed = 0;
  std::vector<MessageRecord> records;
};

struct Arm {
  ScenarioConfig config;
  std::vector<SeedRecords> runs;
};

Arm make_arm(const std::vector<RunResult>& runs);

struct Comparison {
  double baseline_mean_ms = 0.0;  // mean of per-seed means
  double variant_mean_ms = 0.0;
  double change_pct = 0.0;  // (variant / baseline - 1) * 100
  double ci_low_pct = 0.0;
  double ci_high_pct = 0.0;
  bool paired = false;
  std::size_t resamples = 0;

  bool ci_excludes_zero() const { return ci_low_pct > 0.0 || ci_high_pct < 0.0; }
};

inline constexpr std::size_t kMinSeedsPerArm = 5;
inline constexpr std::size_t kBootstrapResamples = 10000;

/// Throws ConfigError when the arms differ in pattern or message size.
void check_comparable(const ScenarioConfig& a, const ScenarioConfig& b);

/// Relative change of mean latency from baseline to variant with a percentile
/// bootstrap 95% CI over per-seed means. Seeds are resampled jointly when both
/// arms ran the same seed list. Throws ConfigError with fewer than 5 seeds per
/// arm or a seed without delivered messages.
Comparison compare(const Arm& baseline, const Arm& variant, LatencyMetric metric,
                   std::size_t resamples = kBootstrapResamples, std::uint64_t bootstrap_seed = 0xB0075);

/// compare without the scenario match check, for arms that differ on purpose
/// in a dimension compare rejects (such as message size).
Comparison compare_unchecked(const Arm& baseline, const Arm& variant, LatencyMetric metric,
                             std::size_t resamples = kBootstrapResamples, std::uint64_t bootstrap_seed = 0xB0075);

/// Per-seed mean latency in ms.
std::vector<double> per_seed_means(const Arm& arm, LatencyMetric metric);

}  // namespace meshsim
