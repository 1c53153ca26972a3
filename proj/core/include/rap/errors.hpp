#pragma once

#include <stdexcept>
#include <string>

namespace rap {

/// Invalid or inconsistent configuration (bad dimension, unknown id, range violation).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tensor/vector dimensions do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value that must be finite was NaN or infinite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Call sequence violated an object's protocol (e.g. stepping a finished episode).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The autodiff tape met an operation that has no reverse-mode rule.
class UnsupportedOperationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rap
