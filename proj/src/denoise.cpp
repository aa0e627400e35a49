#include "fal/denoise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fal/probgen.hpp"

namespace fal {

namespace {

long nnz(const Vector& x) {
  long c = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) ++c;
  return c;
}

long ceil_cap(double v, long cap) {
  if (!(v > 0.0)) return 1;
  if (v >= static_cast<double>(cap)) return cap;
  return static_cast<long>(std::ceil(v));
}

}  // namespace

double upsilon(BallNorm gamma, Eigen::Index m) {
  return gamma == BallNorm::Linf ? std::sqrt(static_cast<double>(m)) : 1.0;
}

double projected_gradient_residual(const Vector& s, const Vector& grad_s,
                                   double L, double delta, BallNorm gamma) {
  if (!(L > 0.0)) throw std::invalid_argument("projected_gradient_residual: L <= 0");
  return L * (s - project_ball(s - grad_s / L, delta, gamma)).norm();
}

DenoiseResult denoise_solve(const ProblemInstance& instance,
                            const DenoiseConfig& config) {
  const FalConfig& fc = config.base;
  const BallNorm gnorm = config.gamma_norm;
  if (config.delta < 0.0)
    throw std::invalid_argument("denoise_solve: delta < 0");

  // Rescaled system (A, b, s, delta) / sigma_max; see fal_solve. The slack
  // block lives in measurement space, so it rescales along with b.
  const double sigma0 = instance.op->sigma_max();
  std::shared_ptr<const LinearOperator> scaled;
  if (sigma0 != 1.0)
    scaled = std::make_shared<ScaledOperator>(instance.op, 1.0 / sigma0);
  const LinearOperator& op = scaled ? *scaled : *instance.op;
  op.reset_multiply_count();
  const Vector b = instance.b / sigma0;
  const double delta = config.delta / sigma0;

  const double sigma = op.sigma_max();
  // Lipschitz constant of the joint block [A I]; with delta = 0 the slack
  // block is frozen and the constant reduces to the equality solver's.
  const double sigma_sq =
      sigma * sigma + (config.delta > 0.0 ? 1.0 : 0.0);
  const double ups = upsilon(gnorm, op.rows());

  Vector x = fc.warm_start ? *fc.warm_start : Vector(op.apply_adjoint(b));
  if (x.lpNorm<Eigen::Infinity>() == 0.0)
    throw std::invalid_argument("denoise_solve: zero measurement");

  const double eta0 = eta_bound(instance);
  double lam = 0.99 * x.lpNorm<Eigen::Infinity>();
  Vector theta = Vector::Zero(op.rows());
  const Vector ax0 = op.apply(x);
  Vector s = project_ball(b - ax0, delta, gnorm);
  double eps =
      0.99 * (lam * x.lpNorm<1>() + 0.5 * (ax0 + s - b).squaredNorm());
  double tau_prev = 0.0;
  double step_l = sigma_sq / (fc.long_steps ? fc.t_init : 1.0);

  SolveReport report;
  Vector x_sol = x, s_sol = s;
  bool converged = false;

  const Vector* xt = instance.x_true ? &*instance.x_true : nullptr;
  if (fc.stop_mode == StopMode::Oracle && !xt)
    throw std::invalid_argument("denoise_solve: oracle stop needs ground truth");

  for (int k = 1; k <= fc.max_outer; ++k) {
    double xi = 0.0;
    if (k >= 2) {
      xi = static_cast<double>(nnz(x)) / static_cast<double>(op.rows());
      const double c_lam = (k == 2) ? fc.c_lambda_init : schedule_c_lambda(xi);
      lam *= c_lam;
      eps *= c_lam * c_lam;
      step_l = sigma_sq / (fc.long_steps ? schedule_t(xi) : 1.0);
    }
    const double c_tau = (k == 2) ? fc.c_tau_init : schedule_c_lambda(xi) - 0.01;

    const double eta_k = eta0 + 0.5 * lam * theta.squaredNorm();
    const double mu_sq = 0.5 * std::pow(eta_k + x.norm(), 2) +
                         0.5 * std::pow(ups * delta + s.norm(), 2);
    const long ell_max = ceil_cap(
        std::sqrt(sigma_sq * mu_sq) * std::sqrt(2.0 / eps), 1L << 40);
    const Vector shifted = b + lam * theta;
    const double L = step_l;

    // --- joint APG over {||x||_1 <= eta_k} x {||s||_gamma <= delta} ---
    Vector ux = x, wx = x, us = s, ws = s;
    Vector gacc_x = Vector::Zero(op.cols());
    Vector gacc_s = Vector::Zero(op.rows());
    double wacc = 0.0, vartheta = 1.0;
    long ell = 0;
    double tau = 0.0;
    char exit_kind = 'u';
    bool outer_stop = false;
    Vector vx, vs, av, ux_prev;
    double last_subgrad = 0.0;
    Vector ax_ret;  // A * x-block of the returned iterate, when cached
    bool ax_valid = false;

    for (;;) {
      if (ell == 0) {
        vx = x;
        vs = s;
      } else {
        vx = (1.0 - vartheta) * ux + vartheta * wx;
        vs = (1.0 - vartheta) * us + vartheta * ws;
      }
      av = op.apply(vx);
      const Vector r = av + vs - shifted;
      const Vector grad_x = op.apply_adjoint(r);
      const Vector& grad_s = r;
      const double subgrad = min_norm_subgradient(vx, grad_x, lam).norm;
      const double resid = projected_gradient_residual(vs, grad_s, L, delta, gnorm);
      last_subgrad = subgrad;

      if (ell == 0) {
        tau = fc.c_hat_tau * subgrad;
        if (k >= 2) tau = std::min(c_tau * tau_prev, tau);
      }
      if (subgrad <= tau && resid <= tau) {
        x = vx;
        s = vs;
        ax_ret = av;
        ax_valid = true;
        exit_kind = 'v';
        ++ell;  // gradient evaluations consumed
        break;
      }

      gacc_x += grad_x / vartheta;
      gacc_s += grad_s / vartheta;
      wacc += 1.0 / vartheta;
      wx = constrained_shrink(x - gacc_x / L, wacc * lam / L, eta_k).x;
      ws = project_ball(s - gacc_s / L, delta, gnorm);
      ux_prev = ux;
      ux = constrained_shrink(vx - grad_x / L, lam / L, eta_k).x;
      us = project_ball(vs - grad_s / L, delta, gnorm);
      if (!ux.allFinite())
        throw NumericError("denoise: non-finite iterate at ell=" + std::to_string(ell));
      vartheta = theta_next(vartheta);
      ++ell;

      bool stop = false;
      switch (fc.stop_mode) {
        case StopMode::Noiseless:
          stop = (ux - ux_prev).lpNorm<Eigen::Infinity>() <= fc.gamma;
          break;
        case StopMode::Oracle:
          stop = (ux - *xt).lpNorm<Eigen::Infinity>() <= fc.gamma;
          break;
        case StopMode::Noisy:
          // discrepancy principle, checked at the outer level
          break;
      }
      if (stop) {
        x = ux;
        s = us;
        exit_kind = 's';
        outer_stop = true;
        break;
      }
      if (ell >= ell_max) {
        x = ux;
        s = us;
        exit_kind = 'u';
        break;
      }
    }

    report.n_apg += ell;
    tau_prev = tau;

    if (fc.stop_mode == StopMode::Noisy) {
      if (!ax_valid) {
        ax_ret = op.apply(x);
        ax_valid = true;
      }
      // ||A x + s - b|| <= sqrt(m) gamma in the original scaling
      if ((ax_ret + s - b).norm() * sigma0 <=
          std::sqrt(static_cast<double>(op.rows())) * fc.gamma) {
        exit_kind = 's';
        outer_stop = true;
      }
    }

    OuterRecord row;
    row.k = k;
    row.lam = lam;
    row.eps = eps;
    row.tau = tau;
    row.theta_norm = theta.norm();
    row.eta_k = eta_k;
    row.step_l = L;
    row.xi = xi;
    row.inner = ell;
    row.ell_max = ell_max;
    row.exit = exit_kind;
    row.subgrad_norm = last_subgrad;
    report.outer.push_back(row);
    report.n_fal = k;

    x_sol = x;
    s_sol = s;
    if (outer_stop) {
      converged = true;
      break;
    }

    const Vector ax = ax_valid ? ax_ret : op.apply(x);
    theta -= (ax + s - b) / lam;
  }

  report.converged = converged;
  report.cap_exceeded = !converged;
  report.n_mat = op.multiply_count();
  report.metrics = evaluate(x_sol, instance);
  report.theta = theta / sigma0;
  // the slack lives in the rescaled measurement space
  return {x_sol, Vector(sigma0 * s_sol), report};
}

}  // namespace fal
