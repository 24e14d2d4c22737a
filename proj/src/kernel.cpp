#include "meshsim/sim/kernel.hpp"

#include <algorithm>
#include <string>

#include "meshsim/sim/errors.hpp"

namespace meshsim {

EventHandle EventKernel::schedule(SimTime fire_at, Action action) {
  if (fire_at < now_) {
    throw ConfigError("event scheduled in the past: fire_at=" + std::to_string(fire_at) +
                      " us, clock=" + std::to_string(now_) + " us");
  }
  const std::uint64_t seq = next_sequence_++;
  heap_.push_back({fire_at, seq});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  actions_.emplace(seq, std::move(action));
  return EventHandle{seq};
}

bool EventKernel::cancel(EventHandle handle) {
  if (!handle) return false;
  return actions_.erase(handle.sequence_no) > 0;
}

std::size_t EventKernel::run(SimTime until) {
  std::size_t count = 0;
  while (!heap_.empty() && heap_.front().fire_at <= until) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Entry entry = heap_.back();
    heap_.pop_back();
    auto it = actions_.find(entry.sequence_no);
    if (it == actions_.end()) continue;  // cancelled
    Action action = std::move(it->second);
    actions_.erase(it);
    now_ = entry.fire_at;
    action();
    ++count;
  }
  now_ = std::max(now_, until);
  dispatched_total_ += count;
  return count;
}

}  // namespace meshsim
