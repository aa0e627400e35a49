#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

#include "fal/linops.hpp"

namespace fal {

// A measurement system: operator + right-hand side + optional ground truth
// and noise metadata.
struct ProblemInstance {
  std::shared_ptr<const LinearOperator> op;
  Vector b;
  std::optional<Vector> x_true;
  double rho = 0.0;    // noise level (std-dev of the measurement noise)
  double delta = 0.0;  // denoising radius ||Ax - b||_gamma <= delta
};

// Final metric row matching the benchmark table rows. Truth-dependent
// fields are NaN when the instance carries no ground truth.
struct MetricRow {
  bool has_truth = false;
  double rel_l1_gap = std::numeric_limits<double>::quiet_NaN();
  double inf_err_plus = std::numeric_limits<double>::quiet_NaN();
  double inf_err_zero = std::numeric_limits<double>::quiet_NaN();
  double rel_l2_error = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;  // ||A x_sol - b||_2
  double x_l1 = 0.0;
  double xtrue_l1 = std::numeric_limits<double>::quiet_NaN();
};

// Thrown when an iterate goes non-finite; the CLI maps it to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fal
