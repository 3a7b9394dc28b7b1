#pragma once

#include <stdexcept>
#include <string>

namespace bsg {

// Invalid argument to an operation (bad horizon, reward out of range, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation called in the wrong lifecycle state.
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// Exhaustive enumeration would exceed its guard.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A bandit-feedback oracle was queried on something other than a prefix of
// the executed bundle.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Malformed scenario text. line() is 1-based, 0 when not line-specific.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bsg
