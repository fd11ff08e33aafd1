#pragma once

#include <stdexcept>
#include <string>

namespace tapc {

/// Base class of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad index, size mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A conditional-independence statistic could not be evaluated on the data.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}
}  // namespace detail

}  // namespace tapc
