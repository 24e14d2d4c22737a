#include "meshsim/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ConfigError("percentile of an empty sample");
  if (!(p > 0.0 && p <= 100.0)) throw ConfigError("percentile must lie in (0, 100]");
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size()) - 1e-9));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

LatencyStats latency_stats(std::vector<double> values) {
  LatencyStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.count = values.size();
  s.mean_ms = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.p90_ms = nearest_rank(values, 90.0);
  s.max_ms = values.back();
  return s;
}

std::vector<double> one_way_latencies_ms(std::span<const MessageRecord> records) {
  std::vector<double> out;
  for (const MessageRecord& r : records) {
    if (r.first_delivery) out.push_back(to_ms(*r.first_delivery - r.send_time));
  }
  return out;
}

std::vector<double> round_trip_latencies_ms(std::span<const MessageRecord> records) {
  std::vector<double> out;
  for (const MessageRecord& r : records) {
    if (r.ack_time) out.push_back(to_ms(*r.ack_time - r.send_time));
  }
  return out;
}

SummaryStats aggregate(std::span<const MessageRecord> records) {
  if (records.empty()) throw ConfigError("aggregate needs at least one record");
  SummaryStats s;
  s.scheduled = records.size();
  double retx = 0.0;
  double frames = 0.0;
  std::map<NodeId, std::vector<MessageRecord>> by_node;
  for (const MessageRecord& r : records) {
    switch (r.outcome) {
      case MessageOutcome::delivered: ++s.delivered; break;
      case MessageOutcome::lost: ++s.lost; break;
      case MessageOutcome::guard_flagged: ++s.guard_flagged; break;
    }
    retx += static_cast<double>(r.retransmissions);
    frames += static_cast<double>(r.frames);
    by_node[r.destination].push_back(r);
  }
  s.reliability_pct = 100.0 * static_cast<double>(s.delivered) / static_cast<double>(s.scheduled);
  s.one_way = latency_stats(one_way_latencies_ms(records));
  s.round_trip = latency_stats(round_trip_latencies_ms(records));
  s.mean_retransmissions = retx / static_cast<double>(s.scheduled);
  s.mean_frames = frames / static_cast<double>(s.scheduled);
  for (const auto& [node, list] : by_node) {
    NodeBreakdown b;
    b.node = node;
    b.scheduled = list.size();
    b.delivered = static_cast<std::size_t>(
        std::count_if(list.begin(), list.end(), [](const MessageRecord& r) { return r.outcome == MessageOutcome::delivered; }));
    b.one_way = latency_stats(one_way_latencies_ms(list));
    b.round_trip = latency_stats(round_trip_latencies_ms(list));
    s.per_node.push_back(b);
  }
  return s;
}

std::vector<std::pair<double, double>> cdf_points(std::vector<double> values) {
  std::vector<std::pair<double, double>> out;
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

}  // namespace meshsim
