#pragma once

#include <stdexcept>
#include <string>

namespace magswim {

// Violated input contract (bad parameters, wrong swimmer class for an analysis).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The grand-resistance matrix is numerically singular at a configuration.
class SingularConfigurationError : public std::runtime_error {
 public:
  SingularConfigurationError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// The time integration produced a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations of the same quantity disagree.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace magswim
