#pragma once

#include <stdexcept>
#include <string>

namespace slp {

// Invalid input data or configuration. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; the message names the offending line.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure during optimization (non-finite objective or gradient).
// Maps to CLI exit code 2.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slp
