#pragma once

// FAL extension for min{ ||x||_1 : ||Ax - b||_gamma <= delta } via a slack
// variable s: joint (x,s) subproblems over the product feasible set, block
// prox steps, projected-gradient residual stopping on the slack block.

#include "fal/fal.hpp"

namespace fal {

struct DenoiseConfig {
  FalConfig base;            // stop_mode default Noisy for this solver
  double delta = 0.0;        // radius; 0 reduces exactly to fal_solve
  BallNorm gamma_norm = BallNorm::L2;
};

struct DenoiseResult {
  Vector x;
  Vector s;
  SolveReport report;
};

// upsilon(gamma): 1 for gamma in {1,2}, sqrt(m) for the inf-norm ball.
double upsilon(BallNorm gamma, Eigen::Index m);

// d(s, Q) = L * || s - proj_Q(s - grad_s / L) ||_2.
double projected_gradient_residual(const Vector& s, const Vector& grad_s,
                                   double L, double delta, BallNorm gamma);

DenoiseResult denoise_solve(const ProblemInstance& instance,
                            const DenoiseConfig& config);

}  // namespace fal
