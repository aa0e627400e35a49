#include "fal/apg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fal {

double theta_next(double vartheta) {
  if (!(vartheta > 0.0) || vartheta > 1.0)
    throw std::invalid_argument("theta_next: vartheta outside (0,1]");
  const double t2 = vartheta * vartheta;
  return 0.5 * (std::sqrt(t2 * t2 + 4.0 * t2) - t2);
}

void apg_init(const ApgProblem& problem, ApgState& state) {
  state.ell = 0;
  state.u = problem.anchor;
  state.w = problem.anchor;
  state.v.resize(0);
  state.vartheta = 1.0;
  state.grad_acc = Vector::Zero(problem.anchor.size());
  state.weight_acc = 0.0;
  state.subgrad_norm = std::numeric_limits<double>::infinity();
  state.objective = std::numeric_limits<double>::infinity();
}

void apg_step_gradient(const ApgProblem& problem, ApgState& state) {
  // v^(0) = anchor exactly (vartheta^(0) = 1, w^(0) = anchor).
  if (state.ell == 0) {
    state.v = problem.anchor;
  } else {
    state.v = (1.0 - state.vartheta) * state.u + state.vartheta * state.w;
  }
  state.av = problem.op->apply(state.v);
  const Vector r = state.av - problem.shifted_rhs;
  state.grad_v = problem.op->apply_adjoint(r);
  state.objective = problem.lam * state.v.lpNorm<1>() + 0.5 * r.squaredNorm();
  state.subgrad_norm = min_norm_subgradient(state.v, state.grad_v, problem.lam).norm;
}

void apg_step_update(const ApgProblem& problem, ApgState& state) {
  state.grad_acc += state.grad_v / state.vartheta;
  state.weight_acc += 1.0 / state.vartheta;

  state.w = constrained_shrink(problem.anchor - state.grad_acc / problem.L,
                               state.weight_acc * problem.lam / problem.L,
                               problem.eta)
                .x;
  state.u_prev = state.u;
  state.u = constrained_shrink(state.v - state.grad_v / problem.L,
                               problem.lam / problem.L, problem.eta)
                .x;
  if (!state.u.allFinite())
    throw NumericError("apg: non-finite iterate at ell=" + std::to_string(state.ell));

  state.vartheta_prev = state.vartheta;
  state.vartheta = theta_next(state.vartheta);
  ++state.ell;
}

void apg_step(const ApgProblem& problem, ApgState& state) {
  apg_step_gradient(problem, state);
  apg_step_update(problem, state);
}

ApgOutcome apg_solve(const ApgProblem& problem, long ell_max, double tau,
                     const ApgCallbacks& callbacks) {
  ApgState state;
  apg_init(problem, state);
  ApgOutcome out;
  for (;;) {
    apg_step_gradient(problem, state);
    if (state.ell == 0 && callbacks.finalize_tau)
      tau = callbacks.finalize_tau(state.subgrad_norm);

    // Subgradient stop at v^(l), checked right after its gradient (the
    // gradient is already paid for; u/w updates are not needed).
    if (state.subgrad_norm <= tau) {
      out.x = state.v;
      out.ax = state.av;
      out.ax_is_current = true;
      out.gradient_evals = state.ell + 1;
      out.exit_reason = ApgExit::Subgradient;
      out.kind = 'v';
      out.subgrad_norm = state.subgrad_norm;
      out.tau_used = tau;
      return out;
    }

    apg_step_update(problem, state);
    if (callbacks.monitor) callbacks.monitor(problem, state);

    if (callbacks.outer_stop && callbacks.outer_stop(state)) {
      out.exit_reason = ApgExit::OuterStop;
      break;
    }
    if (state.ell >= ell_max) {
      out.exit_reason = ApgExit::IterationCap;
      break;
    }
  }
  out.x = state.u;
  out.ax_is_current = false;
  out.gradient_evals = state.ell;
  out.kind = 'u';
  out.subgrad_norm = state.subgrad_norm;
  out.tau_used = tau;
  return out;
}

}  // namespace fal
