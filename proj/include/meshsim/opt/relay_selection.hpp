#pragma once

#include <cstddef>
#include <vector>

#include "meshsim/mesh/pdu.hpp"
#include "meshsim/sim/random.hpp"

namespace meshsim {

/// ceil(fraction * N) relays, computed without floating-point surprises for
/// fractions such as 0.5 or 0.25.
std::size_t relay_count(std::size_t node_count, double fraction);

/// Picks ceil(fraction * nodes.size()) members of `nodes` uniformly without
/// replacement. Returns a relay_enabled mask indexed like `nodes`. Throws
/// ConfigError if fraction is outside (0, 1] or the result would be empty.
std::vector<bool> select_relays(const std::vector<NodeId>& nodes, double fraction, RandomSource& rng);

}  // namespace meshsim
