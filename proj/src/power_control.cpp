#include "meshsim/opt/power_control.hpp"

#include <algorithm>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

void PowerControlConfig::validate(double sensitivity_dbm) const {
  if (p_floor_dbm > p_max_dbm) {
    throw ConfigError("power control: P_floor (" + std::to_string(p_floor_dbm) + " dBm) exceeds P_max (" +
                      std::to_string(p_max_dbm) + " dBm)");
  }
  if (window == 0) throw ConfigError("power control: observation window must hold at least one sample");
  if (!(zeta_th_dbm > sensitivity_dbm)) {
    throw ConfigError("power control: zeta_th (" + std::to_string(zeta_th_dbm) +
                      " dBm) must lie above receiver sensitivity (" + std::to_string(sensitivity_dbm) + " dBm)");
  }
}

void RssiObservation::observe(int channel, double rssi_dbm) {
  if (channel < 37 || channel > 39) return;
  auto& window = samples_[static_cast<std::size_t>(channel - 37)];
  window.push_back(rssi_dbm);
  if (window.size() > window_) window.pop_front();
}

std::optional<double> RssiObservation::minimum(int channel) const {
  if (channel < 37 || channel > 39) return std::nullopt;
  const auto& window = samples_[static_cast<std::size_t>(channel - 37)];
  if (window.empty()) return std::nullopt;
  return *std::min_element(window.begin(), window.end());
}

bool RssiObservation::all_channels_observed() const {
  return std::all_of(samples_.begin(), samples_.end(), [](const auto& w) { return !w.empty(); });
}

std::size_t RssiObservation::samples(int channel) const {
  if (channel < 37 || channel > 39) return 0;
  return samples_[static_cast<std::size_t>(channel - 37)].size();
}

double power_control(const PowerControlConfig& cfg, const RssiObservation& obs) {
  if (!obs.all_channels_observed()) return cfg.p_max_dbm;
  double weakest = *obs.minimum(37);
  weakest = std::min(weakest, *obs.minimum(38));
  weakest = std::min(weakest, *obs.minimum(39));
  const double raw = cfg.p_max_dbm - weakest + cfg.zeta_th_dbm + cfg.c_db;
  return std::clamp(raw, cfg.p_floor_dbm, cfg.p_max_dbm);
}

}  // namespace meshsim
