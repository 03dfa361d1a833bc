#pragma once

#include <stdexcept>
#include <string>

namespace collapse {

// Raised when inputs violate a documented invariant. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical procedure fails (non-convergence, unstable
// integration). Carries the best estimate available at the point of failure.
// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  explicit NumericalError(const std::string& what)
      : NumericalError(what, 0.0) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace collapse
