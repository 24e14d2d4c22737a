#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "meshsim/sim/time.hpp"

namespace meshsim {

/// Identifies a scheduled event so it can be cancelled. A default-constructed
/// handle refers to nothing.
struct EventHandle {
  std::uint64_t sequence_no = 0;
  explicit operator bool() const { return sequence_no != 0; }
  friend bool operator==(EventHandle, EventHandle) = default;
};

/// Single-threaded discrete-event executor with a virtual microsecond clock.
///
/// Events dispatch in (fire_at, sequence_no) order, so two events scheduled for
/// the same instant run in the order they were inserted. Handlers may schedule
/// or cancel further events while running.
class EventKernel {
 public:
  using Action = std::function<void()>;

  /// Throws ConfigError if fire_at lies before the current clock.
  EventHandle schedule(SimTime fire_at, Action action);
  EventHandle schedule_after(Duration delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  /// Returns false if the event already fired, was cancelled, or never existed.
  bool cancel(EventHandle handle);

  /// Dispatches every live event with fire_at <= until, then advances the clock
  /// to `until` (never backwards). Returns the number of events dispatched.
  std::size_t run(SimTime until);

  SimTime now() const { return now_; }
  std::size_t pending() const { return actions_.size(); }
  std::uint64_t dispatched_total() const { return dispatched_total_; }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t sequence_no;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.sequence_no > b.sequence_no;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 1;
  std::uint64_t dispatched_total_ = 0;
  std::vector<Entry> heap_;
  std::unordered_map<std::uint64_t, Action> actions_;
};

}  // namespace meshsim
