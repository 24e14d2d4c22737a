#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "meshsim/harness/compare.hpp"
#include "meshsim/harness/experiment.hpp"
#include "meshsim/harness/export.hpp"
#include "meshsim/harness/metrics.hpp"
#include "meshsim/opt/extended.hpp"
#include "meshsim/opt/power_control.hpp"
#include "meshsim/radio/phy.hpp"
#include "meshsim/scenario/config.hpp"
#include "meshsim/scenario/topology.hpp"

using namespace meshsim;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kSeeds = 10;
constexpr double kMaxRunSeconds = 10.0;
constexpr double kMaxPropertySeconds = 60.0;

const std::string kData = MESHSIM_DATA_DIR;

struct ArmRuns {
  std::vector<RunResult> runs;
  double max_seconds = 0.0;
};

class Bench {
 public:
  Bench() : topo_(load_topology_file(kData + "/topologies/testbed20.topo")) {
    for (const auto& entry : std::filesystem::directory_iterator(kData + "/scenarios")) {
      if (entry.path().extension() != ".scn") continue;
      ScenarioConfig c = load_scenario_file(entry.path().string());
      scenarios_.emplace(c.name, std::move(c));
    }
  }

  const Topology& topology() const { return topo_; }
  const std::map<std::string, ScenarioConfig>& scenarios() const { return scenarios_; }

  const ArmRuns& arm(const std::string& name) {
    auto it = arms_.find(name);
    if (it != arms_.end()) return it->second;
    ArmRuns out;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      const auto t0 = Clock::now();
      out.runs.push_back(run_experiment(topo_, scenarios_.at(name), seed));
      out.max_seconds = std::max(out.max_seconds, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return arms_.emplace(name, std::move(out)).first->second;
  }

  Arm compare_arm(const std::string& name) { return make_arm(arm(name).runs); }

  SummaryStats pooled(const std::string& name) {
    std::vector<MessageRecord> all;
    for (const RunResult& r : arm(name).runs) all.insert(all.end(), r.records.begin(), r.records.end());
    return aggregate(all);
  }

  double mean_of_seed_means(const std::string& name, LatencyMetric metric) {
    const auto means = per_seed_means(compare_arm(name), metric);
    return std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
  }

  Comparison versus(const std::string& baseline, const std::string& variant, LatencyMetric metric) {
    return compare(compare_arm(baseline), compare_arm(variant), metric);
  }

 private:
  Topology topo_;
  std::map<std::string, ScenarioConfig> scenarios_;
  std::map<std::string, ArmRuns> arms_;
};

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string describe(const Comparison& c) {
  return fmt("%.2f -> %.2f ms (%+.1f%%, CI [%+.1f, %+.1f])", c.baseline_mean_ms, c.variant_mean_ms, c.change_pct,
             c.ci_low_pct, c.ci_high_pct);
}

bool lower_with_ci(const Comparison& c) { return c.change_pct < 0.0 && c.ci_excludes_zero(); }
bool higher_with_ci(const Comparison& c) { return c.change_pct > 0.0 && c.ci_excludes_zero(); }

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  write_records_csv(out, r.records);
  return out.str();
}

// Runs a subset of the unit suite and returns (exit status ok, seconds).
std::pair<bool, double> run_unit_filter(const std::string& filter) {
  const std::string cmd = std::string("\"") + MESHSIM_UNIT_BINARY + "\" --gtest_filter='" + filter + "' > /dev/null 2>&1";
  const auto t0 = Clock::now();
  const int status = std::system(cmd.c_str());
  return {status == 0, std::chrono::duration<double>(Clock::now() - t0).count()};
}

void determinism(Bench& b) {
  bool identical = true;
  double slowest = 0.0;
  std::string culprit;
  for (const auto& [name, cfg] : b.scenarios()) {
    const RunResult& first = b.arm(name).runs.front();
    const auto t0 = Clock::now();
    const RunResult again = run_experiment(b.topology(), cfg, first.seed);
    slowest = std::max({slowest, b.arm(name).max_seconds, std::chrono::duration<double>(Clock::now() - t0).count()});
    if (csv_of(first) != csv_of(again)) {
      identical = false;
      culprit = name;
    }
  }
  report(1, "determinism", identical && slowest < kMaxRunSeconds,
         fmt("%zu scenarios byte-identical=%s, slowest run %.2f s (limit %.0f s)%s", b.scenarios().size(),
             identical ? "yes" : "no", slowest, kMaxRunSeconds, culprit.empty() ? "" : (" differs: " + culprit).c_str()));
}

void unicast_reliability(Bench& b) {
  bool pass = true;
  std::string detail;
  std::size_t count = 0;
  for (const auto& [name, cfg] : b.scenarios()) {
    if (cfg.mode != PublishMode::unicast_acked) continue;
    ++count;
    const SummaryStats s = b.pooled(name);
    if (s.reliability_pct != 100.0 || s.guard_flagged != 0) {
      pass = false;
      detail += fmt(" %s=%.3f%%/guard %zu", name.c_str(), s.reliability_pct, s.guard_flagged);
    }
  }
  report(2, "unicast reliability", pass && count > 0,
         fmt("%zu unicast scenarios at 100%% with no guard flags", count) + (detail.empty() ? "" : "; failing:" + detail));
}

void mode_tradeoff(Bench& b) {
  const Comparison rtt = b.versus("o2m_unicast", "o2m_group", LatencyMetric::round_trip);
  const double lossy = b.pooled("o2m_group_lossy").reliability_pct;
  const double single = b.pooled("single_group_lossy").reliability_pct;
  const bool pass = lower_with_ci(rtt) && lossy < 100.0 && single >= lossy;
  report(3, "mode trade-off", pass,
         "unicast->group round trip " + describe(rtt) +
             fmt("; lossy group reliability multi-hop %.3f%%, single-hop %.3f%%", lossy, single));
}

void load_sensitivity(Bench& b) {
  const Comparison c = b.versus("m2m3", "m2m7", LatencyMetric::one_way);
  report(4, "load sensitivity", higher_with_ci(c), "3 -> 7 senders one-way " + describe(c));
}

void segmentation_cost(Bench& b) {
  const Comparison c = compare_unchecked(b.compare_arm("m2m3"), b.compare_arm("seg19"), LatencyMetric::one_way);
  report(5, "segmentation cost", higher_with_ci(c), "11 -> 19 octets one-way " + describe(c));
}

void parameter_tuning(Bench& b) {
  const Comparison m3 = b.versus("m2m3", "p1000_10_m3", LatencyMetric::one_way);
  const Comparison m7 = b.versus("m2m7", "p1000_10_m7", LatencyMetric::one_way);
  const double fast = b.mean_of_seed_means("p1000_10_m3", LatencyMetric::one_way);
  const double mid = b.mean_of_seed_means("p500_10_m3", LatencyMetric::one_way);
  const double slow = b.mean_of_seed_means("m2m3", LatencyMetric::one_way);
  const bool between = fast < mid && mid < slow;
  const bool pass = lower_with_ci(m3) && m7.change_pct < 0.0 && between;
  report(6, "parameter tuning", pass,
         "2000-20 -> 1000-10 (3 senders) " + describe(m3) + "; (7 senders) " + describe(m7) +
             fmt("; 500-10 %.2f ms between 1000-10 %.2f and 2000-20 %.2f: %s", mid, fast, slow, between ? "yes" : "no"));
}

void extended_advertising(Bench& b) {
  const Comparison o2m = b.versus("o2m_legacy50", "o2m_ext50", LatencyMetric::round_trip);
  const Comparison m2m = b.versus("m2m_legacy50", "m2m_ext50", LatencyMetric::one_way);
  ExtendedParams ext;
  ext.enabled = false;
  const Duration legacy_air = primary_airtime_per_message(50, 3, ext);
  ext.enabled = true;
  const Duration ext_air = primary_airtime_per_message(50, 3, ext);
  const bool arithmetic = legacy_air == 3 * 3 * (4 * 392 + 312) && ext_air == 3 * 3 * 160 && ext_air < legacy_air;
  report(7, "extended advertising", lower_with_ci(o2m) && lower_with_ci(m2m) && arithmetic,
         "one-to-many round trip " + describe(o2m) + "; many-to-many one-way " + describe(m2m) +
             fmt("; primary airtime %lld vs %lld us", static_cast<long long>(legacy_air),
                 static_cast<long long>(ext_air)));
}

double mean_tx_power(Bench& b, const std::string& name) {
  double sum = 0.0;
  for (const RunResult& r : b.arm(name).runs) sum += r.stats.mean_tx_power_dbm;
  return sum / static_cast<double>(b.arm(name).runs.size());
}

void power_control_mechanism(Bench& b) {
  const auto [unit_ok, unit_seconds] = run_unit_filter("PowerControl.*:RssiWindow.*");
  PowerControlConfig cfg;
  cfg.p_max_dbm = 0.0;
  cfg.zeta_th_dbm = -70.0;
  cfg.c_db = 0.0;
  RssiObservation o;
  for (int ch : kPrimaryChannels) o.observe(ch, -60.0);
  const bool example = power_control(cfg, o) == -10.0;
  const double fixed_tx = mean_tx_power(b, "m2m3");
  const double tx70 = mean_tx_power(b, "power70");
  const double retx70 = b.pooled("power70").mean_retransmissions;
  const double retx80 = b.pooled("power80").mean_retransmissions;
  const bool pass = unit_ok && example && tx70 <= fixed_tx && retx80 >= retx70;
  report(8, "power control", pass,
         fmt("law tests %s; mean tx fixed %.2f dBm, zeta -70 %.2f dBm, zeta -80 %.2f dBm; retransmissions per "
             "message zeta -70 %.4f, zeta -80 %.4f",
             unit_ok && example ? "pass" : "fail", fixed_tx, tx70, mean_tx_power(b, "power80"), retx70, retx80));
}

void relay_fraction(Bench& b) {
  const Comparison half = b.versus("m2m7", "relays_half", LatencyMetric::one_way);
  const Comparison quarter = b.versus("m2m7", "relays_quarter", LatencyMetric::one_way);
  report(9, "relay fraction", lower_with_ci(half) && quarter.change_pct < 0.0,
         "all -> half relays " + describe(half) + "; all -> quarter relays " + describe(quarter));
}

void property_suite() {
  const auto [ok, seconds] = run_unit_filter(
      "Audit.*:Cache.*:Network.GroupMessageUsesSixSourceFrames:Segmentation.*:Reassembly.*:"
      "CollisionOracle.*:Relays.*");
  report(10, "protocol invariants", ok && seconds < kMaxPropertySeconds,
         fmt("TTL, loop freedom, 6-frame budget, segmentation 0-380, collision oracle, relay counts: %s in %.2f s "
             "(limit %.0f s)",
             ok ? "pass" : "fail", seconds, kMaxPropertySeconds));
}

void guarded(int id, const char* title, auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, title, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  Bench bench;
  guarded(1, "determinism", [&] { determinism(bench); });
  guarded(2, "unicast reliability", [&] { unicast_reliability(bench); });
  guarded(3, "mode trade-off", [&] { mode_tradeoff(bench); });
  guarded(4, "load sensitivity", [&] { load_sensitivity(bench); });
  guarded(5, "segmentation cost", [&] { segmentation_cost(bench); });
  guarded(6, "parameter tuning", [&] { parameter_tuning(bench); });
  guarded(7, "extended advertising", [&] { extended_advertising(bench); });
  guarded(8, "power control", [&] { power_control_mechanism(bench); });
  guarded(9, "relay fraction", [&] { relay_fraction(bench); });
  guarded(10, "protocol invariants", [] { property_suite(); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
