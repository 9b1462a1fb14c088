#pragma once

#include <stdexcept>
#include <string>

namespace qfree {

/// Thrown when an input is singular or degenerate (zero quaternion,
/// zero scale factor, singular linear system).
class SingularInputError : public std::runtime_error {
 public:
  explicit SingularInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative solver exhausts its budget. Carries the best
/// residual seen so failures can be diagnosed from the message alone.
class NoConvergenceError : public std::runtime_error {
 public:
  NoConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what + " (best residual " + std::to_string(best_residual) + ")"),
        residual(best_residual) {}
  double residual;
};

}  // namespace qfree
