#pragma once

#include <stdexcept>
#include <string>

namespace sublab {

// Exception types map one-to-one onto CLI exit codes.

/// Invalid parameters or malformed input (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation refused because it would exceed its work budget (exit code 3).
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Singular matrices, degenerate models, failed internal identities (exit code 4).
class NumericError : public std::domain_error {
 public:
  explicit NumericError(const std::string& what) : std::domain_error(what) {}
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ConfigError(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace sublab
