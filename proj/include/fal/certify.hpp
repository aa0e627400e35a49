#pragma once

// Independent optimality certificates and brute-force oracles used by tests
// and the CLI's --certify flag. Matrix-free; all applications uncounted.

#include "fal/problem.hpp"

namespace fal {

struct Certificate {
  Vector dual_point;        // w, feasible for max{ b^T w : ||A^T w||_inf <= 1 }
  double dual_value = 0.0;  // b^T w
  double primal_value = 0.0;  // ||x||_1
  double gap = 0.0;           // primal - dual (>= 0 up to roundoff)
  double dual_feasibility = 0.0;  // ||A^T w||_inf (<= 1 after rescaling)
};

// Rescales theta to dual feasibility: w = theta / max(1, ||A^T theta||_inf).
Certificate duality_gap_certificate(const Vector& x, const Vector& theta,
                                    const ProblemInstance& instance);

struct GradientAudit {
  double lhs_inf = 0.0;    // ||A^T (Ax - b - lam*theta)||_inf
  double bound_inf = 0.0;  // sqrt(2 eps) sigma_max + lam
  double lhs_l2 = 0.0;
  double bound_l2 = 0.0;  // (sqrt(n)/sigma_min) * bound_inf
  bool pass = false;
};

GradientAudit gradient_norm_audit(const Vector& x, double lam,
                                  const Vector& theta, double eps,
                                  const ProblemInstance& instance);

// Bisection reference for constrained_shrink: solves
// ||shrink(y, lam + alpha)||_1 = eta on alpha in [0, ||y||_inf] to 1e-12.
// Requires ||shrink(y, lam)||_1 > eta.
Vector l1_projection_oracle(const Vector& y, double lam, double eta);

}  // namespace fal
