#pragma once

#include <stdexcept>
#include <string>

namespace drnet {

/// Malformed or inconsistent experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable or invalid problem data: matrices, labels, masks, networks
/// loaded from files, and infeasible split requests (CLI exit code 3).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace drnet
