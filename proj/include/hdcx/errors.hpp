#pragma once

#include <stdexcept>
#include <string>

namespace hdcx {

// Root of every error the library throws. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misuse of an operation: mismatched dimensions, out-of-range rates.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Hyperparameters or experiment settings that cannot be honoured.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// An accumulator count would leave the 32-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class ModelFileError : public Error {
 public:
  enum class Kind { Io, BadMagic, VersionMismatch, Truncated, Checksum, Malformed };

  ModelFileError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace hdcx
