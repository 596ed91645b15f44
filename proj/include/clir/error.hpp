#pragma once

#include <stdexcept>
#include <string>

namespace clir {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad or missing configuration (empty model list, invalid parameter).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Unreadable input or unwritable output.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Malformed input data (duplicate ids, bad record syntax, empty corpus).
class DataError : public Error {
  public:
    using Error::Error;
};

}  // namespace clir
