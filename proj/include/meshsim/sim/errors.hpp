#pragma once

#include <stdexcept>
#include <string>

namespace meshsim {

/// Invalid input, parameter or precondition supplied by the caller. Fatal for
/// the run that raised it.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal protocol invariant broken (e.g. an advertiser overlapping its own
/// frames). Indicates a bug, not bad input.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace meshsim
