#include "meshsim/harness/export.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {

constexpr const char* kRecordHeader =
    "app_msg_id,source,destination,send_time_us,first_delivery_us,ack_time_us,retransmissions,frames,outcome";

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string opt(const std::optional<SimTime>& t) { return t ? std::to_string(*t) : std::string(); }

template <typename T>
T field(const std::string& cell, std::size_t line) {
  T v{};
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ConfigError("records csv line " + std::to_string(line) + ": bad value '" + cell + "'");
  }
  return v;
}

std::optional<SimTime> opt_field(const std::string& cell, std::size_t line) {
  if (cell.empty()) return std::nullopt;
  return field<SimTime>(cell, line);
}

nlohmann::json latency_json(const LatencyStats& s) {
  return {{"count", s.count}, {"mean_ms", s.mean_ms}, {"p90_ms", s.p90_ms}, {"max_ms", s.max_ms}};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const MessageRecord> records) {
  out << kRecordHeader << '\n';
  for (const MessageRecord& r : records) {
    out << r.app_msg_id << ',' << r.source << ',' << r.destination << ',' << r.send_time << ',' << opt(r.first_delivery)
        << ',' << opt(r.ack_time) << ',' << r.retransmissions << ',' << r.frames << ',' << to_string(r.outcome) << '\n';
  }
}

std::vector<MessageRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw ConfigError("records csv: unexpected header");
  std::vector<MessageRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) throw ConfigError("records csv line " + std::to_string(line_no) + ": expected 9 columns");
    MessageRecord r;
    r.app_msg_id = field<AppMsgId>(cells[0], line_no);
    r.source = field<NodeId>(cells[1], line_no);
    r.destination = field<NodeId>(cells[2], line_no);
    r.send_time = field<SimTime>(cells[3], line_no);
    r.first_delivery = opt_field(cells[4], line_no);
    r.ack_time = opt_field(cells[5], line_no);
    r.retransmissions = field<std::uint64_t>(cells[6], line_no);
    r.frames = field<std::uint64_t>(cells[7], line_no);
    if (cells[8] == "delivered") r.outcome = MessageOutcome::delivered;
    else if (cells[8] == "lost") r.outcome = MessageOutcome::lost;
    else if (cells[8] == "guard_flagged") r.outcome = MessageOutcome::guard_flagged;
    else throw ConfigError("records csv line " + std::to_string(line_no) + ": bad outcome '" + cells[8] + "'");
    out.push_back(r);
  }
  return out;
}

void write_cdf_csv(std::ostream& out, std::span<const std::pair<double, double>> points) {
  out << "latency_ms,cumulative_fraction\n";
  for (const auto& [value, fraction] : points) out << fmt(value) << ',' << fmt(fraction) << '\n';
}

nlohmann::json stats_json(const SummaryStats& s) {
  nlohmann::json per_node = nlohmann::json::array();
  for (const NodeBreakdown& b : s.per_node) {
    per_node.push_back({{"node", b.node},
                        {"scheduled", b.scheduled},
                        {"delivered", b.delivered},
                        {"one_way", latency_json(b.one_way)},
                        {"round_trip", latency_json(b.round_trip)}});
  }
  return {{"scheduled", s.scheduled},
          {"delivered", s.delivered},
          {"lost", s.lost},
          {"guard_flagged", s.guard_flagged},
          {"reliability_pct", s.reliability_pct},
          {"one_way", latency_json(s.one_way)},
          {"round_trip", latency_json(s.round_trip)},
          {"mean_retransmissions", s.mean_retransmissions},
          {"mean_frames", s.mean_frames},
          {"per_node", per_node}};
}

nlohmann::json summary_json(const RunResult& run, const SummaryStats& stats, const std::string& topology_name) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : scenario_entries(run.config)) config[key] = value;
  const RunStats& rs = run.stats;
  return {{"seed", run.seed},
          {"topology", topology_name},
          {"config", config},
          {"scenario_text", to_document(run.config)},
          {"stats", stats_json(stats)},
          {"run",
           {{"frames", rs.frames},
            {"mesh_frames", rs.mesh_frames},
            {"mean_tx_power_dbm", rs.mean_tx_power_dbm},
            {"relayed_pdus", rs.relayed_pdus},
            {"originated_pdus", rs.originated_pdus},
            {"anomalies", rs.anomalies},
            {"events", rs.events},
            {"end_time_us", rs.end_time}}}};
}

ScenarioConfig scenario_from_summary(const nlohmann::json& summary) {
  if (!summary.contains("scenario_text")) throw ConfigError("summary has no scenario_text");
  return load_scenario(summary.at("scenario_text").get<std::string>());
}

void export_run(const std::filesystem::path& dir, const std::string& stem, const RunResult& run,
                const std::string& topology_name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
  const SummaryStats stats = aggregate(run.records);
  {
    auto out = open_for_write(dir / (stem + ".csv"));
    write_records_csv(out, run.records);
  }
  {
    auto out = open_for_write(dir / (stem + "_summary.json"));
    out << summary_json(run, stats, topology_name).dump(2) << '\n';
  }
  {
    auto out = open_for_write(dir / (stem + "_cdf_one_way.csv"));
    write_cdf_csv(out, cdf_points(one_way_latencies_ms(run.records)));
  }
  {
    auto out = open_for_write(dir / (stem + "_cdf_round_trip.csv"));
    write_cdf_csv(out, cdf_points(round_trip_latencies_ms(run.records)));
  }
}

}  // namespace meshsim
