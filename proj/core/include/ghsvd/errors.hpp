#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ghsvd {

/// Caller broke a documented precondition (shape mismatch, bad signature entry, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base for failures caused by the numbers rather than by the caller.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hyperbolic pivot with zero J-norm (or a singular 2x2 pivot Grammian).
class DegeneratePivot : public NumericalError {
 public:
  DegeneratePivot(std::size_t step, const std::string& what)
      : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// The positive definite side of the pencil is numerically indefinite or singular.
class IndefiniteMetric : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace ghsvd
