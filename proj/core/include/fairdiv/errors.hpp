#pragma once

#include <stdexcept>

namespace fairdiv {

// Thrown when an iterative numerical routine cannot reach its target:
// quadrature that fails to converge within its panel budget, a multiplier
// solver that exceeds its iteration bound, or a fixed point iteration that
// stalls. Callers that map errors to process exit codes should treat this
// as distinct from configuration errors (std::invalid_argument).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fairdiv
