#include "meshsim/harness/compare.hpp"

#include <algorithm>
#include <numeric>

#include "meshsim/harness/metrics.hpp"
#include "meshsim/sim/errors.hpp"
#include "meshsim/sim/random.hpp"

namespace meshsim {

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double percentile(std::vector<double>& sorted, double p) { return nearest_rank(sorted, p); }

}  // namespace

const char* to_string(LatencyMetric metric) { return metric == LatencyMetric::one_way ? "one-way" : "round-trip"; }

Arm make_arm(const std::vector<RunResult>& runs) {
  if (runs.empty()) throw ConfigError("an arm needs at least one run");
  Arm arm;
  arm.config = runs.front().config;
  for (const RunResult& r : runs) arm.runs.push_back({r.seed, r.records});
  return arm;
}

void check_comparable(const ScenarioConfig& a, const ScenarioConfig& b) {
  if (a.pattern != b.pattern) {
    throw ConfigError(std::string("arms differ in pattern: ") + to_string(a.pattern) + " vs " + to_string(b.pattern));
  }
  if (a.message_size != b.message_size) {
    throw ConfigError("arms differ in message_size: " + std::to_string(a.message_size) + " vs " +
                      std::to_string(b.message_size));
  }
}

std::vector<double> per_seed_means(const Arm& arm, LatencyMetric metric) {
  std::vector<double> out;
  for (const SeedRecords& run : arm.runs) {
    const std::vector<double> lat =
        metric == LatencyMetric::one_way ? one_way_latencies_ms(run.records) : round_trip_latencies_ms(run.records);
    if (lat.empty()) throw ConfigError("seed " + std::to_string(run.seed) + " has no " + to_string(metric) + " latencies");
    out.push_back(mean(lat));
  }
  return out;
}

Comparison compare(const Arm& baseline, const Arm& variant, LatencyMetric metric, std::size_t resamples,
                   std::uint64_t bootstrap_seed) {
  check_comparable(baseline.config, variant.config);
  return compare_unchecked(baseline, variant, metric, resamples, bootstrap_seed);
}

Comparison compare_unchecked(const Arm& baseline, const Arm& variant, LatencyMetric metric, std::size_t resamples,
                             std::uint64_t bootstrap_seed) {
  if (baseline.runs.size() < kMinSeedsPerArm || variant.runs.size() < kMinSeedsPerArm) {
    throw ConfigError("compare needs at least " + std::to_string(kMinSeedsPerArm) + " seeds per arm");
  }
  if (resamples == 0) throw ConfigError("compare needs at least one bootstrap resample");
  const std::vector<double> base = per_seed_means(baseline, metric);
  const std::vector<double> var = per_seed_means(variant, metric);

  Comparison c;
  c.baseline_mean_ms = mean(base);
  c.variant_mean_ms = mean(var);
  if (c.baseline_mean_ms <= 0.0) throw ConfigError("baseline mean latency is not positive");
  c.change_pct = (c.variant_mean_ms / c.baseline_mean_ms - 1.0) * 100.0;
  c.resamples = resamples;
  c.paired = base.size() == var.size() &&
             std::equal(baseline.runs.begin(), baseline.runs.end(), variant.runs.begin(),
                        [](const SeedRecords& a, const SeedRecords& b) { return a.seed == b.seed; });

  RandomSource rng(bootstrap_seed);
  std::vector<double> changes;
  changes.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    double sb = 0.0;
    double sv = 0.0;
    if (c.paired) {
      for (std::size_t i = 0; i < base.size(); ++i) {
        const std::size_t k = rng.index(base.size());
        sb += base[k];
        sv += var[k];
      }
    } else {
      for (std::size_t i = 0; i < base.size(); ++i) sb += base[rng.index(base.size())];
      for (std::size_t i = 0; i < var.size(); ++i) sv += var[rng.index(var.size())];
    }
    const double mb = sb / static_cast<double>(base.size());
    const double mv = sv / static_cast<double>(var.size());
    changes.push_back((mv / mb - 1.0) * 100.0);
  }
  std::sort(changes.begin(), changes.end());
  c.ci_low_pct = percentile(changes, 2.5);
  c.ci_high_pct = percentile(changes, 97.5);
  return c;
}

}  // namespace meshsim
