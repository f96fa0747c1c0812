#pragma once

#include <stdexcept>
#include <string>

namespace atomflux {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short stable identifier, e.g. "NoPeak".
  virtual const char* name() const noexcept { return "Error"; }
};

/// A configuration or argument violates a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "ConfigError"; }
};

class NoPeakError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "NoPeak"; }
};

class InsufficientResolutionError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "InsufficientResolution"; }
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "InsufficientData"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* name() const noexcept override { return "IoError"; }
};

}  // namespace atomflux
