#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>

namespace meshsim {

/// Received-signal-strength driven transmit power law, in the dB domain:
/// P_ctl = clamp(P_max - P_r + zeta_th + c, P_floor, P_max), where P_r is the
/// minimum received power observed on the primary advertising channels.
struct PowerControlConfig {
  double p_max_dbm = 0.0;
  double zeta_th_dbm = -70.0;  // minimum required received signal strength
  double c_db = 0.0;
  double p_floor_dbm = -20.0;
  std::size_t window = 16;  // recent samples kept per channel

  /// Throws ConfigError if p_floor > p_max, the window is empty, or zeta_th is
  /// not above `sensitivity_dbm`.
  void validate(double sensitivity_dbm) const;
};

/// Sliding-window minimum of received power on channels 37, 38 and 39.
class RssiObservation {
 public:
  explicit RssiObservation(std::size_t window = 16) : window_(window == 0 ? 1 : window) {}

  /// Samples on non-primary channels are ignored.
  void observe(int channel, double rssi_dbm);

  /// Minimum over the window on `channel`; empty until the first sample.
  std::optional<double> minimum(int channel) const;

  /// True once every primary channel has at least one sample.
  bool all_channels_observed() const;

  std::size_t samples(int channel) const;

 private:
  std::size_t window_;
  std::array<std::deque<double>, 3> samples_;
};

/// Returns P_max while any primary channel lacks a sample; otherwise the
/// clamped dB-domain law using the minimum across the three channel minima.
double power_control(const PowerControlConfig& cfg, const RssiObservation& obs);

}  // namespace meshsim
