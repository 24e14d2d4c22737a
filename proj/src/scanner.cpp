#include "meshsim/mesh/scanner.hpp"

namespace meshsim {

std::optional<int> scanner_channel_at(const ScannerConfig& cfg, SimTime t) {
  const SimTime shifted = t + cfg.phase;
  const Duration offset = shifted % cfg.interval;
  if (offset < cfg.retune_gap || offset >= cfg.window) return std::nullopt;
  return 37 + static_cast<int>((shifted / cfg.interval) % 3);
}

bool scanner_tuned_throughout(const ScannerConfig& cfg, int channel, SimTime start, SimTime end) {
  if (end <= start) return false;
  const SimTime first = start + cfg.phase;
  const SimTime last = end - 1 + cfg.phase;
  if (first / cfg.interval != last / cfg.interval) return false;
  if (first % cfg.interval < cfg.retune_gap) return false;
  if (last % cfg.interval >= cfg.window) return false;
  return 37 + static_cast<int>((first / cfg.interval) % 3) == channel;
}

}  // namespace meshsim
