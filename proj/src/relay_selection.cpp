#include "meshsim/opt/relay_selection.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

std::size_t relay_count(std::size_t node_count, double fraction) {
  const double exact = fraction * static_cast<double>(node_count);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

std::vector<bool> select_relays(const std::vector<NodeId>& nodes, double fraction, RandomSource& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("relay fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const std::size_t count = relay_count(nodes.size(), fraction);
  if (count == 0) throw ConfigError("relay fraction selects no relays");

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<bool> mask(nodes.size(), false);
  // partial Fisher-Yates: the first `count` positions become the relay set
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.index(order.size() - i);
    std::swap(order[i], order[j]);
    mask[order[i]] = true;
  }
  return mask;
}

}  // namespace meshsim
