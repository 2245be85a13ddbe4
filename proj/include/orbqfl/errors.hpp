#pragma once

#include <stdexcept>
#include <string>

namespace orbqfl {

// Exception families map onto CLI exit codes (see cli.hpp).
// Plain std::invalid_argument is used for violated function preconditions.

/// Bad command line: conflicting or missing flags. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data missing or malformed. Exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration failed validation. Exit code 4.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace orbqfl
