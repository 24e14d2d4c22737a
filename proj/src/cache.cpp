#include "meshsim/mesh/cache.hpp"

namespace meshsim {

bool NetworkCache::insert(std::uint16_t src, std::uint32_t seq) {
  const std::uint64_t k = key(src, seq);
  if (!members_.insert(k).second) return false;
  order_.push_back(k);
  if (order_.size() > capacity_) {
    members_.erase(order_.front());
    order_.pop_front();
  }
  return true;
}

}  // namespace meshsim
