#pragma once

#include <stdexcept>
#include <string>

namespace kgstab {

/// Argument outside the admissible frequency window or parameter range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Grid too coarse or too short for the requested profile or operator.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The closed-form sign of d'' disagrees with the finite-difference oracle.
class OracleDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The evolved field exceeded the blow-up guard.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace kgstab
