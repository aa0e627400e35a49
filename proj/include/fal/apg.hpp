#pragma once

// Accelerated proximal gradient inner solver specialized to
//   min lam*||x||_1 + 0.5*||A x - shifted_rhs||^2  over  ||x||_1 <= eta,
// with quadratic prox h(x) = 0.5*||x - anchor||^2 (convexity c = 1) and the
// infinite-memory w-step kept as two running accumulators.

#include <functional>
#include <limits>

#include "fal/problem.hpp"
#include "fal/prox.hpp"

namespace fal {

struct ApgProblem {
  double lam;
  const LinearOperator* op;
  Vector shifted_rhs;  // b + lam*theta
  double eta;
  double L;
  Vector anchor;  // x_hat; also u^(0) = v^(0) = w^(0)
};

struct ApgState {
  long ell = 0;
  Vector u, v, w;
  double vartheta = 1.0;
  Vector grad_acc;  // sum_i grad f(v^(i)) / vartheta^(i)
  double weight_acc = 0.0;

  // Diagnostics from the most recent gradient evaluation / update.
  Vector grad_v, av;
  double subgrad_norm = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::infinity();
  Vector u_prev;
  double vartheta_prev = 1.0;
};

enum class ApgExit { IterationCap, Subgradient, OuterStop };

struct ApgOutcome {
  Vector x;
  Vector ax;           // A*x when ax_is_current (subgradient exit caches Av)
  bool ax_is_current = false;
  long gradient_evals = 0;  // = operator application pairs consumed
  ApgExit exit_reason = ApgExit::IterationCap;
  char kind = 'u';  // cap/outer-stop return u^(l), subgradient returns v^(l)
  double subgrad_norm = 0.0;
  double tau_used = 0.0;
};

struct ApgCallbacks {
  // Called once, after the gradient at v^(0) = anchor is available; returns
  // the tau to use for this inner solve (the FAL driver finalizes tau^(k)
  // from ||g0^(k)|| here, at no extra operator cost).
  std::function<double(double g0_norm)> finalize_tau;
  // FALstop predicate, checked after each u-update (state.u vs state.u_prev).
  std::function<bool(const ApgState&)> outer_stop;
  // Observation hook, called after each completed iteration.
  std::function<void(const ApgProblem&, const ApgState&)> monitor;
};

// theta recurrence (sign-corrected): (sqrt(t^4 + 4 t^2) - t^2) / 2.
double theta_next(double vartheta);

void apg_init(const ApgProblem& problem, ApgState& state);

// First half of an iteration: form v = (1-theta)u + theta*w, evaluate the
// gradient at v (one forward + one adjoint application), the objective and
// the min-norm subgradient at v.
void apg_step_gradient(const ApgProblem& problem, ApgState& state);

// Second half: accumulator update, w- and u-steps, theta update, ell++.
void apg_step_update(const ApgProblem& problem, ApgState& state);

// One full iteration (both halves); for tests and oracles.
void apg_step(const ApgProblem& problem, ApgState& state);

ApgOutcome apg_solve(const ApgProblem& problem, long ell_max, double tau,
                     const ApgCallbacks& callbacks = {});

}  // namespace fal
