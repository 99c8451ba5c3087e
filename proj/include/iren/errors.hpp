#pragma once

#include <stdexcept>
#include <string>

namespace iren {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- file I/O ---

class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public IoError {
 public:
  using IoError::IoError;
};

class CorruptFileError : public IoError {
 public:
  using IoError::IoError;
};

class MultiChannelError : public IoError {
 public:
  using IoError::IoError;
};

// --- geometry / lattice preconditions ---

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class MarkerExceedsMaskError : public Error {
 public:
  using Error::Error;
};

class MarkerBelowMaskError : public Error {
 public:
  using Error::Error;
};

// --- configuration ---

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConfigUnknownKeyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConfigInvalidValueError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace iren
