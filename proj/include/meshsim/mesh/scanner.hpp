#pragma once

#include <optional>

#include "meshsim/sim/time.hpp"

namespace meshsim {

/// Continuous or duty-cycled scanning that rotates 37 -> 38 -> 39 at each
/// interval boundary. `phase` shifts a node's rotation relative to the global
/// clock; `retune_gap` is dead time at the start of every interval while the
/// radio switches channel.
struct ScannerConfig {
  Duration interval = milliseconds(2000);
  Duration window = milliseconds(2000);
  Duration phase = 0;
  Duration retune_gap = 0;
};

/// Primary channel the scanner listens on at `t`, or empty when idle.
std::optional<int> scanner_channel_at(const ScannerConfig& cfg, SimTime t);

/// True iff the scanner sits on `channel` for every tick of [start, end).
bool scanner_tuned_throughout(const ScannerConfig& cfg, int channel, SimTime start, SimTime end);

}  // namespace meshsim
