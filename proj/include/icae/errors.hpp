#pragma once

#include <stdexcept>
#include <string>

namespace icae {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension or shape mismatch between operands.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Non-finite values or other numeric breakdowns.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration or unsatisfiable construction parameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Dataset contents violate an operation's requirements.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// File parsing / serialization failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// A point handed to an inverse map does not lie in the map's image.
class NotInImageError : public Error {
 public:
  explicit NotInImageError(const std::string& msg) : Error(msg) {}
};

// A sample-based estimate has no usable samples.
class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& msg) : Error(msg) {}
};

}  // namespace icae
