#pragma once

// Closed-form proximal and projection kernels: soft-thresholding shrinkage,
// l1-ball-constrained shrinkage (sort/prefix-sum pivot search), norm-ball
// projections for the slack block, and the min-norm subgradient of the
// augmented Lagrangian. All pure functions.

#include <Eigen/Core>

namespace fal {

using Vector = Eigen::VectorXd;

enum class BallNorm { L1, L2, Linf };

struct ShrinkResult {
  Vector x;
  double alpha_star = 0.0;  // l1-constraint multiplier, 0 when inactive
  bool active = false;
};

struct SubgradientInfo {
  double norm_sq = 0.0;
  double norm = 0.0;
};

// sign(z) .* max(|z| - nu, 0)
Vector shrink(const Vector& z, double nu);

// argmin { lam*||x||_1 + 0.5*||x - y||^2 : ||x||_1 <= eta }.
// Unconstrained shrinkage when feasible; otherwise the threshold lam+alpha*
// is found by a descending sort of |shrink(y,lam)| and a prefix-sum scan.
ShrinkResult constrained_shrink(const Vector& y, double lam, double eta);

// Euclidean projection onto { ||s||_gamma <= delta }.
Vector project_ball(const Vector& s, double delta, BallNorm gamma);

// Squared norm of the least-norm element of the subdifferential of
// lam*||.||_1 + f at x, given grad_f = grad f(x). Zero components contribute
// max(|grad_f_i| - lam, 0)^2; comparisons with zero are exact (iterates are
// produced by shrinkage, so exact zeros occur by construction).
SubgradientInfo min_norm_subgradient(const Vector& x, const Vector& grad_f,
                                     double lam);

}  // namespace fal
