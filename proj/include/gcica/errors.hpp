#pragma once

#include <stdexcept>
#include <string>

namespace gcica {

/// Invalid or inconsistent configuration (bad field value, dimension mismatch).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A function was called with arguments outside its domain.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Filesystem / persistence failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcica
