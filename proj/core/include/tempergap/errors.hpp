#pragma once

#include <stdexcept>
#include <string>

namespace tempergap {

// Argument and precondition failures derive from std::invalid_argument so
// callers that only care about "bad input" can catch one type.

class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WellDefinednessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The gradient flow from the query point stalls at a critical point that
/// separates the two basins.
class UndefinedBasinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfTubeError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class ExtractionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tempergap
