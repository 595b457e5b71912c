#pragma once

#include <stdexcept>

namespace krm {

// Argument outside the mathematical domain of an operation (|x| > 1, n < 0, c <= 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A discretization parameter is too coarse to resolve the requested quantity.
struct ResolutionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Shape or basis mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Eigen-solver failure, lost symmetry, or another numerical breakdown.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace krm
