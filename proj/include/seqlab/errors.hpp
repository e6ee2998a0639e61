#pragma once

#include <stdexcept>
#include <string>

namespace seqlab {

struct InvalidSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& what, long iterations, double residual)
      : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                           ", residual=" + std::to_string(residual) + ")"),
        iterations(iterations),
        residual(residual) {}
  long iterations;
  double residual;
};

struct EmptyIntersectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidPrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrderViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundedBodyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExhaustedError : std::runtime_error {
  BudgetExhaustedError(const std::string& what, int level)
      : std::runtime_error(what + " (level=" + std::to_string(level) + ")"),
        level(level) {}
  int level;
};

struct UnsupportedEstimatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seqlab
