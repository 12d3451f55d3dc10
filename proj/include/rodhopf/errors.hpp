#pragma once

#include <stdexcept>
#include <string>

namespace rodhopf {

// Bad user input: parameters, shapes, config files. Maps to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not deliver. Maps to exit code 1.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class ConsistencyError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class StiffnessError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class InsufficientDataError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

// Raised when a weakly nonlinear prediction is requested for coefficients
// that do not describe a supercritical bifurcation.
class NotApplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace rodhopf
