#pragma once

#include <stdexcept>
#include <string>

namespace extremal {

// Error taxonomy mirrors the CLI exit codes: config 2, insufficient data 3,
// numeric 4. Anything IO-ish is treated as a config/environment problem.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace extremal
