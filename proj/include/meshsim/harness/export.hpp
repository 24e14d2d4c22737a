#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "meshsim/harness/experiment.hpp"
#include "meshsim/harness/metrics.hpp"

namespace meshsim {

/// Per-message CSV. Columns:
/// app_msg_id,source,destination,send_time_us,first_delivery_us,ack_time_us,retransmissions,frames,outcome
/// Times are integer microseconds; absent times are empty cells.
void write_records_csv(std::ostream& out, std::span<const MessageRecord> records);
std::vector<MessageRecord> read_records_csv(std::istream& in);

/// Columns: latency_ms,cumulative_fraction
void write_cdf_csv(std::ostream& out, std::span<const std::pair<double, double>> points);

nlohmann::json stats_json(const SummaryStats& stats);

/// Summary with the complete scenario echo, its document form and the seed.
nlohmann::json summary_json(const RunResult& run, const SummaryStats& stats, const std::string& topology_name);

/// Rebuilds the scenario from a summary's echo.
ScenarioConfig scenario_from_summary(const nlohmann::json& summary);

/// Writes <stem>.csv, <stem>_summary.json, <stem>_cdf_one_way.csv and
/// <stem>_cdf_round_trip.csv into `dir` (created if needed). Throws
/// ConfigError when the destination is not writable.
void export_run(const std::filesystem::path& dir, const std::string& stem, const RunResult& run,
                const std::string& topology_name);

}  // namespace meshsim
