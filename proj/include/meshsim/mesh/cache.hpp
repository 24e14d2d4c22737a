#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <unordered_set>

namespace meshsim {

/// FIFO set of recently seen (source address, sequence number) pairs.
class NetworkCache {
 public:
  explicit NetworkCache(std::size_t capacity = 128) : capacity_(capacity == 0 ? 1 : capacity) {}

  bool contains(std::uint16_t src, std::uint32_t seq) const { return members_.count(key(src, seq)) != 0; }

  /// Returns false (and changes nothing) if the pair is already cached.
  bool insert(std::uint16_t src, std::uint32_t seq);

  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  static std::uint64_t key(std::uint16_t src, std::uint32_t seq) {
    return (static_cast<std::uint64_t>(src) << 32) | seq;
  }

  std::size_t capacity_;
  std::deque<std::uint64_t> order_;
  std::unordered_set<std::uint64_t> members_;
};

}  // namespace meshsim
