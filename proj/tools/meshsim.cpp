#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meshsim/harness/compare.hpp"
#include "meshsim/harness/experiment.hpp"
#include "meshsim/harness/export.hpp"
#include "meshsim/harness/metrics.hpp"
#include "meshsim/scenario/config.hpp"
#include "meshsim/scenario/topology.hpp"
#include "meshsim/sim/errors.hpp"

using namespace meshsim;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
        continue;
      }
      const std::uint64_t lo = std::stoull(item.substr(0, dash));
      const std::uint64_t hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("empty seed range '" + item + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } catch (const std::logic_error&) {
      throw ConfigError("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

ScenarioConfig load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
  ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_scenario_file(path);
  for (const std::string& o : overrides) apply_override(cfg, o);
  if (auto problems = validate(cfg); !problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

void print_summary(const std::string& label, const SummaryStats& s, const RunStats& rs) {
  std::printf("%-24s rel %7.3f%%  one-way mean %8.2f p90 %8.2f max %8.2f  rtt mean %8.2f p90 %8.2f max %8.2f  "
              "retx %.3f  tx %.2f dBm  guard %zu\n",
              label.c_str(), s.reliability_pct, s.one_way.mean_ms, s.one_way.p90_ms, s.one_way.max_ms,
              s.round_trip.mean_ms, s.round_trip.p90_ms, s.round_trip.max_ms, s.mean_retransmissions,
              rs.mean_tx_power_dbm, s.guard_flagged);
}

std::string stem_for(const ScenarioConfig& cfg, std::uint64_t seed) {
  return (cfg.name.empty() ? std::string("run") : cfg.name) + "_seed" + std::to_string(seed);
}

struct Common {
  std::string topology = "data/topologies/testbed20.topo";
  std::string scenario;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--topology", c.topology, "topology file")->capture_default_str();
  cmd->add_option("--set", c.overrides, "scenario override key=value (repeatable)");
  cmd->add_option("--out-dir", c.out_dir, "directory for CSV/JSON output");
}

int cmd_run(const Common& c, const std::string& seeds_text) {
  const Topology topo = load_topology_file(c.topology);
  const ScenarioConfig cfg = load_with_overrides(c.scenario, c.overrides);
  const std::vector<std::uint64_t> seeds = seeds_text.empty() ? std::vector<std::uint64_t>{cfg.seed} : parse_seeds(seeds_text);
  for (std::uint64_t seed : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult run = run_experiment(topo, cfg, seed);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const SummaryStats stats = aggregate(run.records);
    print_summary("seed " + std::to_string(seed), stats, run.stats);
    std::printf("%-24s %zu records, %llu frames, %.2f s wall\n", "", run.records.size(),
                static_cast<unsigned long long>(run.stats.frames), wall);
    if (!c.out_dir.empty()) export_run(c.out_dir, stem_for(cfg, seed), run, topo.name());
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::string& seeds_text, const std::string& vary) {
  const Topology topo = load_topology_file(c.topology);
  const ScenarioConfig base = load_with_overrides(c.scenario, c.overrides);
  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
  std::string key;
  std::vector<std::string> values{""};
  if (!vary.empty()) {
    const auto eq = vary.find('=');
    if (eq == std::string::npos) throw ConfigError("--vary expects key=v1,v2,...");
    key = vary.substr(0, eq);
    values.clear();
    std::stringstream in(vary.substr(eq + 1));
    for (std::string v; std::getline(in, v, ',');) values.push_back(v);
  }

  std::ofstream table;
  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    table.open(std::filesystem::path(c.out_dir) / "sweep.csv");
    if (!table) throw ConfigError("cannot write sweep.csv in " + c.out_dir);
    table << "value,seed,reliability_pct,one_way_mean_ms,one_way_p90_ms,one_way_max_ms,round_trip_mean_ms,"
             "round_trip_p90_ms,round_trip_max_ms,mean_retransmissions,mean_tx_power_dbm,guard_flagged\n";
  }
  for (const std::string& value : values) {
    ScenarioConfig cfg = base;
    if (!key.empty()) apply_override(cfg, key, value);
    std::vector<MessageRecord> pooled;
    RunStats last;
    double power = 0.0;
    for (std::uint64_t seed : seeds) {
      const RunResult run = run_experiment(topo, cfg, seed);
      const SummaryStats s = aggregate(run.records);
      power += run.stats.mean_tx_power_dbm;
      last = run.stats;
      pooled.insert(pooled.end(), run.records.begin(), run.records.end());
      if (table) {
        table << value << ',' << seed << ',' << s.reliability_pct << ',' << s.one_way.mean_ms << ',' << s.one_way.p90_ms
              << ',' << s.one_way.max_ms << ',' << s.round_trip.mean_ms << ',' << s.round_trip.p90_ms << ','
              << s.round_trip.max_ms << ',' << s.mean_retransmissions << ',' << run.stats.mean_tx_power_dbm << ','
              << s.guard_flagged << '\n';
      }
      if (!c.out_dir.empty()) {
        export_run(c.out_dir, stem_for(cfg, seed) + (key.empty() ? "" : "_" + value), run, topo.name());
      }
    }
    last.mean_tx_power_dbm = power / static_cast<double>(seeds.size());
    print_summary(key.empty() ? "pooled" : key + "=" + value, aggregate(pooled), last);
  }
  return 0;
}

int cmd_compare(const std::string& topology, const std::string& baseline_path, const std::string& variant_path,
                const std::vector<std::string>& base_over, const std::vector<std::string>& var_over,
                const std::string& seeds_text, const std::string& metric_text, bool any_size) {
  const Topology topo = load_topology_file(topology);
  const ScenarioConfig base = load_with_overrides(baseline_path, base_over);
  const ScenarioConfig var = load_with_overrides(variant_path, var_over);
  if (!any_size) check_comparable(base, var);
  LatencyMetric metric = LatencyMetric::one_way;
  if (metric_text == "round-trip") metric = LatencyMetric::round_trip;
  else if (metric_text != "one-way") throw ConfigError("--metric must be one-way or round-trip");
  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
  const Arm a = make_arm(run_seeds(topo, base, seeds));
  const Arm b = make_arm(run_seeds(topo, var, seeds));
  const Comparison cmp = any_size ? compare_unchecked(a, b, metric) : compare(a, b, metric);
  std::printf("metric %s, %zu seeds, %s bootstrap (%zu resamples)\n", to_string(metric), seeds.size(),
              cmp.paired ? "paired" : "unpaired", cmp.resamples);
  std::printf("baseline mean %.3f ms\nvariant  mean %.3f ms\nchange %+.2f%%  95%% CI [%+.2f%%, %+.2f%%]%s\n",
              cmp.baseline_mean_ms, cmp.variant_mean_ms, cmp.change_pct, cmp.ci_low_pct, cmp.ci_high_pct,
              cmp.ci_excludes_zero() ? "" : "  (includes 0)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bluetooth mesh managed-flooding simulator"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_seeds_text;
  auto* run = app.add_subcommand("run", "simulate one scenario for one or more seeds");
  add_common(run, run_opts);
  run->add_option("--scenario", run_opts.scenario, "scenario file (defaults when omitted)");
  run->add_option("--seed,--seeds", run_seeds_text, "seed, list (1,2,5) or range (1-10)");

  Common sweep_opts;
  std::string sweep_seeds = "1-10";
  std::string vary;
  auto* sweep = app.add_subcommand("sweep", "run a scenario over seeds and optionally one varied key");
  add_common(sweep, sweep_opts);
  sweep->add_option("--scenario", sweep_opts.scenario, "scenario file");
  sweep->add_option("--seeds", sweep_seeds, "seed list or range")->capture_default_str();
  sweep->add_option("--vary", vary, "key=v1,v2,... swept across values");

  std::string cmp_topology = "data/topologies/testbed20.topo";
  std::string baseline_path;
  std::string variant_path;
  std::vector<std::string> base_over;
  std::vector<std::string> var_over;
  std::string cmp_seeds = "1-10";
  std::string metric = "one-way";
  bool any_size = false;
  auto* cmp = app.add_subcommand("compare", "relative mean-latency change of a variant against a baseline");
  cmp->add_option("--topology", cmp_topology, "topology file")->capture_default_str();
  cmp->add_option("--baseline", baseline_path, "baseline scenario file")->required();
  cmp->add_option("--variant", variant_path, "variant scenario file")->required();
  cmp->add_option("--set-baseline", base_over, "override applied to the baseline");
  cmp->add_option("--set-variant", var_over, "override applied to the variant");
  cmp->add_option("--seeds", cmp_seeds, "seed list or range")->capture_default_str();
  cmp->add_option("--metric", metric, "one-way or round-trip")->capture_default_str();
  cmp->add_flag("--allow-mismatch", any_size, "compare arms that differ in pattern or message size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_opts, run_seeds_text);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_seeds, vary);
    if (*cmp) return cmd_compare(cmp_topology, baseline_path, variant_path, base_over, var_over, cmp_seeds, metric, any_size);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
