#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "meshsim/harness/experiment.hpp"

namespace meshsim {

struct LatencyStats {
  std::size_t count = 0;
  double mean_ms = 0.0;
  double p90_ms = 0.0;
  double max_ms = 0.0;
};

struct NodeBreakdown {
  NodeId node = 0;
  std::size_t scheduled = 0;
  std::size_t delivered = 0;
  LatencyStats one_way;
  LatencyStats round_trip;
};

struct SummaryStats {
  std::size_t scheduled = 0;
  std::size_t delivered = 0;
  std::size_t lost = 0;
  std::size_t guard_flagged = 0;
  double reliability_pct = 0.0;
  LatencyStats one_way;
  LatencyStats round_trip;
  double mean_retransmissions = 0.0;
  double mean_frames = 0.0;
  std::vector<NodeBreakdown> per_node;  // by destination, ascending
};

/// Nearest-rank percentile (p in (0, 100]) of an ascending sequence.
double nearest_rank(std::span<const double> sorted, double p);

/// Mean, p90 and max of a sample in milliseconds; all zero when empty.
LatencyStats latency_stats(std::vector<double> values_ms);

/// Throws ConfigError on an empty record list.
SummaryStats aggregate(std::span<const MessageRecord> records);

std::vector<double> one_way_latencies_ms(std::span<const MessageRecord> records);
std::vector<double> round_trip_latencies_ms(std::span<const MessageRecord> records);

/// Empirical CDF as (value, cumulative fraction), ascending, one point per
/// distinct value.
std::vector<std::pair<double, double>> cdf_points(std::vector<double> values);

}  // namespace meshsim
