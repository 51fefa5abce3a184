#pragma once

#include <stdexcept>
#include <string>

namespace facspeed {

/// Invalid configuration: worker counts, grains, plan shape, benchmark params.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A timing sample that violates the accounting invariants.
class InconsistentSample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed results/plan/CSV input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace facspeed
