#include "meshsim/scenario/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

namespace {

struct BadValue {
  std::string what;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
template <typename Int>
std::string fmt_int(Int v) {
  return std::to_string(v);
}
std::string fmt(bool v) { return v ? "true" : "false"; }

double parse_real(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw BadValue{"expected a number, got '" + s + "'"};
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw BadValue{"expected an integer, got '" + s + "'"};
  if (v < static_cast<long long>(std::numeric_limits<Int>::min()) ||
      static_cast<unsigned long long>(v) > static_cast<unsigned long long>(std::numeric_limits<Int>::max())) {
    throw BadValue{"integer " + s + " out of range"};
  }
  return static_cast<Int>(v);
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw BadValue{"expected a non-negative integer, got '" + s + "'"};
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw BadValue{"expected true or false, got '" + s + "'"};
}

struct Key {
  const char* name;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define REAL(key, field) \
  Key { key, [](const ScenarioConfig& c) { return fmt(c.field); }, [](ScenarioConfig& c, const std::string& v) { c.field = parse_real(v); } }
#define INT(key, field, T) \
  Key { key, [](const ScenarioConfig& c) { return fmt_int(c.field); }, [](ScenarioConfig& c, const std::string& v) { c.field = parse_integer<T>(v); } }
#define BOOL(key, field) \
  Key { key, [](const ScenarioConfig& c) { return fmt(c.field); }, [](ScenarioConfig& c, const std::string& v) { c.field = parse_bool(v); } }
#define US(key, field) \
  Key { key, [](const ScenarioConfig& c) { return fmt_int(c.field); }, [](ScenarioConfig& c, const std::string& v) { c.field = parse_integer<std::int64_t>(v); } }

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = {
      Key{"name", [](const ScenarioConfig& c) { return c.name; }, [](ScenarioConfig& c, const std::string& v) { c.name = v; }},
      Key{"pattern", [](const ScenarioConfig& c) { return std::string(to_string(c.pattern)); },
          [](ScenarioConfig& c, const std::string& v) {
            if (v == "one-to-many") c.pattern = TrafficPattern::one_to_many;
            else if (v == "many-to-one") c.pattern = TrafficPattern::many_to_one;
            else if (v == "many-to-many") c.pattern = TrafficPattern::many_to_many;
            else throw BadValue{"expected one-to-many, many-to-one or many-to-many, got '" + v + "'"};
          }},
      INT("senders", senders, std::size_t),
      Key{"mode", [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); },
          [](ScenarioConfig& c, const std::string& v) {
            if (v == "unicast-acked") c.mode = PublishMode::unicast_acked;
            else if (v == "group-acked-fixed") c.mode = PublishMode::group_acked_fixed;
            else throw BadValue{"expected unicast-acked or group-acked-fixed, got '" + v + "'"};
          }},
      INT("message_size", message_size, std::size_t),
      INT("iterations", iterations, std::size_t),
      REAL("period_ms", period_ms),
      REAL("jitter_ms", jitter_ms),
      BOOL("spread_unicast", spread_unicast),
      INT("controller", controller, int),
      Key{"slaves",
          [](const ScenarioConfig& c) {
            std::string out;
            for (int s : c.slaves) out += (out.empty() ? "" : ",") + std::to_string(s);
            return out;
          },
          [](ScenarioConfig& c, const std::string& v) {
            c.slaves.clear();
            std::stringstream in(v);
            for (std::string item; std::getline(in, item, ',');) {
              item = trim(item);
              if (item.empty()) throw BadValue{"empty entry in slave list"};
              c.slaves.push_back(parse_integer<int>(item));
            }
          }},
      Key{"seed", [](const ScenarioConfig& c) { return std::to_string(c.seed); },
          [](ScenarioConfig& c, const std::string& v) { c.seed = parse_u64(v); }},

      REAL("adv.interval_ms", adv_interval_ms),
      REAL("adv.delay_max_ms", adv_delay_max_ms),
      REAL("adv.turnaround_us", adv_turnaround_us),
      INT("adv.events_source", adv_events_source, int),
      INT("adv.events_relay", adv_events_relay, int),
      INT("adv.relay_queue_limit", adv_relay_queue_limit, std::size_t),

      REAL("scan.interval_ms", scan_interval_ms),
      REAL("scan.window_ms", scan_window_ms),
      REAL("scan.retune_gap_us", scan_retune_gap_us),
      BOOL("scan.random_phase", scan_random_phase),

      REAL("radio.tx_power_dbm", radio.tx_power_dbm),
      REAL("radio.pl0_db", radio.path_loss.reference_loss_db),
      REAL("radio.path_loss_exponent", radio.path_loss.exponent),
      REAL("radio.shadowing_db", radio.shadowing_db),
      REAL("radio.capture_db", radio.capture_db),
      REAL("radio.sensitivity_1m_dbm", radio.sensitivity_1m_dbm),
      REAL("radio.sensitivity_2m_dbm", radio.sensitivity_2m_dbm),
      REAL("radio.link_margin_db", radio.link_margin_db),
      REAL("radio.frame_loss", frame_loss),

      REAL("interference.rate_hz", interference.rate_hz),
      REAL("interference.power_dbm", interference.power_dbm),
      US("interference.frame_us", interference.frame_length),

      REAL("relay.fraction", relay_fraction),

      BOOL("power.enabled", power_enabled),
      REAL("power.zeta_th_dbm", power_zeta_th_dbm),
      REAL("power.c_db", power_c_db),
      REAL("power.floor_dbm", power_floor_dbm),
      INT("power.window", power_window, std::size_t),

      BOOL("extended.enabled", extended.enabled),
      US("extended.aux_offset_us", extended.aux_offset),
      INT("extended.indication_octets", extended.indication_octets, std::size_t),
      INT("extended.max_unsegmented", extended.max_unsegmented, std::size_t),

      REAL("transport.retry_interval_ms", retry_interval_ms),
      INT("transport.retry_cap", retry_cap, std::uint32_t),
      REAL("transport.guard_ms", guard_ms),
      INT("transport.ttl", ttl, int),
      REAL("transport.seg_ack_timeout_ms", seg_ack_timeout_ms),
      REAL("transport.reassembly_timeout_ms", reassembly_timeout_ms),
      INT("transport.seg_rounds", seg_rounds, int),
      INT("transport.cache_size", cache_size, std::size_t),

      REAL("run.drain_ms", drain_ms),
  };
  return keys;
}

#undef REAL
#undef INT
#undef BOOL
#undef US

const Key* find_key(std::string_view name) {
  for (const Key& k : registry()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

}  // namespace

const char* to_string(TrafficPattern pattern) {
  switch (pattern) {
    case TrafficPattern::one_to_many: return "one-to-many";
    case TrafficPattern::many_to_one: return "many-to-one";
    case TrafficPattern::many_to_many: return "many-to-many";
  }
  return "?";
}

const char* to_string(PublishMode mode) {
  return mode == PublishMode::unicast_acked ? "unicast-acked" : "group-acked-fixed";
}

MeshParams ScenarioConfig::mesh_params() const {
  MeshParams p;
  p.adv.interval = from_ms(adv_interval_ms);
  p.adv.delay_max = from_ms(adv_delay_max_ms);
  p.adv.turnaround = static_cast<Duration>(std::llround(adv_turnaround_us));
  p.adv.relay_queue_limit = adv_relay_queue_limit;
  p.scan.interval = from_ms(scan_interval_ms);
  p.scan.window = scan_window_ms > 0.0 ? from_ms(scan_window_ms) : p.scan.interval;
  p.scan.retune_gap = static_cast<Duration>(std::llround(scan_retune_gap_us));
  p.randomize_scan_phase = scan_random_phase;
  p.transport.retry_interval = from_ms(retry_interval_ms);
  p.transport.retry_cap = retry_cap;
  p.transport.guard = from_ms(guard_ms);
  p.transport.seg_ack_timeout = from_ms(seg_ack_timeout_ms);
  p.transport.reassembly_timeout = from_ms(reassembly_timeout_ms);
  p.transport.seg_retransmit_rounds = seg_rounds;
  p.transport.cache_capacity = cache_size;
  p.transport.default_ttl = static_cast<std::uint8_t>(ttl);
  p.extended = extended;
  p.power_control = power_enabled;
  p.power.p_max_dbm = radio.tx_power_dbm;
  p.power.zeta_th_dbm = power_zeta_th_dbm;
  p.power.c_db = power_c_db;
  p.power.p_floor_dbm = power_floor_dbm;
  p.power.window = power_window;
  p.interference = interference;
  return p;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) { return to_document(a) == to_document(b); }

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const char* key, const std::string& what) {
    if (!ok) e.push_back(std::string(key) + ": " + what);
  };
  need(c.senders >= 1, "senders", "must be at least 1");
  need(c.iterations >= 1, "iterations", "must be at least 1");
  need(c.period_ms > 0.0, "period_ms", "must be positive");
  need(c.jitter_ms >= 0.0, "jitter_ms", "must be non-negative");
  need(c.message_size >= 1 && c.message_size <= kMaxAccessPayload, "message_size", "must lie in [1, 380]");
  need(c.drain_ms >= 0.0, "run.drain_ms", "must be non-negative");
  need(c.mode != PublishMode::group_acked_fixed || c.pattern == TrafficPattern::one_to_many, "mode",
       "group-acked-fixed requires pattern one-to-many");

  need(from_ms(c.adv_interval_ms) > 0, "adv.interval_ms", "must be positive");
  need(c.adv_delay_max_ms >= 0.0, "adv.delay_max_ms", "must be non-negative");
  need(c.adv_turnaround_us >= 0.0, "adv.turnaround_us", "must be non-negative");
  need(c.adv_events_source >= 1, "adv.events_source", "must be at least 1");
  need(c.adv_events_relay >= 1, "adv.events_relay", "must be at least 1");

  need(from_ms(c.scan_interval_ms) > 0, "scan.interval_ms", "must be positive");
  need(c.scan_window_ms >= 0.0 && c.scan_window_ms <= c.scan_interval_ms, "scan.window_ms",
       "must lie in [0, scan.interval_ms] (0 means the whole interval)");
  const double window_us = (c.scan_window_ms > 0.0 ? c.scan_window_ms : c.scan_interval_ms) * 1000.0;
  need(c.scan_retune_gap_us >= 0.0 && c.scan_retune_gap_us < window_us, "scan.retune_gap_us",
       "must be non-negative and shorter than the scan window");

  need(c.radio.path_loss.exponent > 0.0, "radio.path_loss_exponent", "must be positive");
  need(c.radio.shadowing_db >= 0.0, "radio.shadowing_db", "must be non-negative");
  need(c.radio.capture_db >= 0.0, "radio.capture_db", "must be non-negative");
  need(c.frame_loss >= 0.0 && c.frame_loss < 1.0, "radio.frame_loss", "must lie in [0, 1)");

  need(c.interference.rate_hz >= 0.0, "interference.rate_hz", "must be non-negative");
  need(c.interference.frame_length > 0, "interference.frame_us", "must be positive");

  need(c.relay_fraction > 0.0 && c.relay_fraction <= 1.0, "relay.fraction", "must lie in (0, 1]");

  need(c.power_window >= 1, "power.window", "must be at least 1");
  need(c.power_floor_dbm <= c.radio.tx_power_dbm, "power.floor_dbm", "must not exceed radio.tx_power_dbm");
  need(!c.power_enabled || c.power_zeta_th_dbm > c.radio.sensitivity_1m_dbm, "power.zeta_th_dbm",
       "must lie above radio.sensitivity_1m_dbm");

  need(c.extended.aux_offset >= 0, "extended.aux_offset_us", "must be non-negative");
  need(c.extended.indication_octets >= 1, "extended.indication_octets", "must be at least 1");
  need(c.extended.max_unsegmented >= kMaxUnsegmentedPayload && c.extended.max_unsegmented <= kMaxAccessPayload,
       "extended.max_unsegmented", "must lie in [11, 380]");

  need(from_ms(c.retry_interval_ms) > 0, "transport.retry_interval_ms", "must be positive");
  need(c.guard_ms > 0.0, "transport.guard_ms", "must be positive");
  need(c.ttl >= 0 && c.ttl <= kMaxTtl, "transport.ttl", "must lie in [0, 127]");
  need(c.seg_ack_timeout_ms > 0.0, "transport.seg_ack_timeout_ms", "must be positive");
  need(c.reassembly_timeout_ms > 0.0, "transport.reassembly_timeout_ms", "must be positive");
  need(c.seg_rounds >= 0, "transport.seg_rounds", "must be non-negative");
  need(c.cache_size >= 1, "transport.cache_size", "must be at least 1");
  return e;
}

void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const Key* k = find_key(trim(key));
  if (!k) throw ConfigError("unknown scenario key '" + std::string(key) + "'");
  try {
    k->set(cfg, trim(value));
  } catch (const BadValue& bad) {
    throw ConfigError(std::string(k->name) + ": " + bad.what);
  }
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ScenarioConfig load_scenario(std::string_view document) {
  ScenarioConfig cfg;
  std::vector<std::string> errors;
  std::istringstream in{std::string(document)};
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::pair<std::string, std::size_t>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "meshsim-scenario 1") {
        errors.push_back("line " + std::to_string(line_no) + ": expected header 'meshsim-scenario 1'");
        break;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Key* k = find_key(key);
    if (!k) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      continue;
    }
    for (const auto& [prev, prev_line] : seen) {
      if (prev == key) {
        errors.push_back("line " + std::to_string(line_no) + ": " + key + " already set on line " +
                         std::to_string(prev_line));
      }
    }
    seen.emplace_back(key, line_no);
    try {
      k->set(cfg, value);
    } catch (const BadValue& bad) {
      errors.push_back("line " + std::to_string(line_no) + ": " + key + ": " + bad.what);
    }
  }
  if (!header_seen) errors.push_back("line 1: missing header 'meshsim-scenario 1'");
  if (errors.empty()) {
    for (const std::string& v : validate(cfg)) errors.push_back(v);
  }
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::vector<std::pair<std::string, std::string>> scenario_entries(const ScenarioConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : registry()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

std::string to_document(const ScenarioConfig& cfg) {
  std::string doc = "meshsim-scenario 1\n";
  for (const auto& [key, value] : scenario_entries(cfg)) doc += key + " = " + value + "\n";
  return doc;
}

}  // namespace meshsim
