#pragma once

#include <stdexcept>
#include <string>

namespace fringe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed inputs: out-of-range values, shape mismatches, bad file contents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint stage does not match the requested operation.
class StageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A run configuration that cannot be executed (empty class, batch too small, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fringe
