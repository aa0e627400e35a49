#include "fal/fal.hpp"

#include <cmath>
#include <stdexcept>

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

std::function<bool(const ApgState&)> make_fal_stop(const FalConfig& config,
                                                   const ProblemInstance& instance) {
  switch (config.stop_mode) {
    case StopMode::Noiseless:
      return [g = config.gamma](const ApgState& s) {
        return (s.u - s.u_prev).lpNorm<Eigen::Infinity>() <= g;
      };
    case StopMode::Oracle: {
      if (!instance.x_true)
        throw std::invalid_argument("fal_solve: oracle stop needs ground truth");
      return [g = config.gamma, xt = *instance.x_true](const ApgState& s) {
        return (s.u - xt).lpNorm<Eigen::Infinity>() <= g;
      };
    }
    case StopMode::Noisy:
      // Discrepancy principle, checked at the outer level: stop once the
      // residual matches the per-measurement noise level gamma = rho.
      return {};
  }
  throw std::invalid_argument("fal_solve: unknown stop mode");
}

}  // namespace

double eta_bound(const ProblemInstance& instance) {
  const LinearOperator& op = *instance.op;
  if (op.orthogonal_rows())
    return op.apply_adjoint_uncounted(instance.b).lpNorm<1>();
  if (op.rows() >= op.cols())
    throw std::invalid_argument("eta_bound: Gaussian bound needs m < n");
  const double ratio =
      static_cast<double>(op.rows()) / static_cast<double>(op.cols());
  return instance.b.norm() / (1.0 - std::sqrt(ratio));
}

double schedule_c_lambda(double xi) {
  if (xi >= 0.9) return 0.9;
  if (xi >= 0.6) return 0.85;
  if (xi >= 0.25) return 0.8;
  if (xi >= 0.1) return 0.6;
  return 0.4;
}

double schedule_t(double xi) {
  if (xi >= 0.9) return 1.8;
  if (xi >= 0.6) return 1.85;
  if (xi >= 0.25) return 1.9;
  if (xi >= 0.1) return 2.0;
  return 3.0;
}

FalResult fal_solve(const ProblemInstance& instance, const FalConfig& config) {
  // Solve the rescaled system (A, b) / sigma_max; the feasible set, the
  // solution, and eta are unchanged, but the schedules see sigma = 1 and the
  // shrink threshold lam/L stays commensurate with the gradient steps (the
  // raw Gaussian scaling buries the signal in residual-driven junk).
  const double sigma0 = instance.op->sigma_max();
  std::shared_ptr<const LinearOperator> scaled;
  if (sigma0 != 1.0)
    scaled = std::make_shared<ScaledOperator>(instance.op, 1.0 / sigma0);
  const LinearOperator& op = scaled ? *scaled : *instance.op;
  op.reset_multiply_count();
  const Vector b = instance.b / sigma0;

  const double sigma = op.sigma_max();
  const double sigma_sq = sigma * sigma;

  Vector x = config.warm_start ? *config.warm_start
                               : Vector(op.apply_adjoint(b));
  if (x.lpNorm<Eigen::Infinity>() == 0.0)
    throw std::invalid_argument("fal_solve: zero measurement");

  const double eta0 = eta_bound(instance);
  double lam = 0.99 * x.lpNorm<Eigen::Infinity>();
  Vector theta = Vector::Zero(op.rows());
  const Vector ax0 = op.apply(x);
  double eps = 0.99 * (lam * x.lpNorm<1>() + 0.5 * (ax0 - b).squaredNorm());
  double tau_prev = 0.0;
  double step_l = sigma_sq / (config.long_steps ? config.t_init : 1.0);

  SolveReport report;
  const auto fal_stop = make_fal_stop(config, instance);

  Vector x_sol = x;
  bool converged = false;

  for (int k = 1; k <= config.max_outer; ++k) {
    double xi = 0.0;
    if (k >= 2) {
      xi = static_cast<double>(nnz(x)) / static_cast<double>(op.rows());
      const double c_lam = (k == 2) ? config.c_lambda_init : schedule_c_lambda(xi);
      lam *= c_lam;
      eps *= c_lam * c_lam;
      step_l = sigma_sq / (config.long_steps ? schedule_t(xi) : 1.0);
    }
    const double c_tau =
        (k == 2) ? config.c_tau_init : schedule_c_lambda(xi) - 0.01;

    const double eta_k = eta0 + 0.5 * lam * theta.squaredNorm();
    const long ell_max = ceil_cap(
        sigma * (eta_k + x.norm()) * std::sqrt(2.0 / eps), 1L << 40);

    ApgProblem sub{lam, &op, b + lam * theta, eta_k, step_l, x};

    ApgCallbacks cb;
    double tau_k = 0.0;
    cb.finalize_tau = [&](double g0) {
      tau_k = config.c_hat_tau * g0;
      if (k >= 2) tau_k = std::min(c_tau * tau_prev, tau_k);
      return tau_k;
    };
    cb.outer_stop = fal_stop;

    if (config.record_inner && instance.x_true) {
      const Vector& xt = *instance.x_true;
      const double xt_norm = xt.norm();
      const double xt_l1 = xt.lpNorm<1>();
      const double b_norm = b.norm();
      const long base_apg = report.n_apg;
      cb.monitor = [&, xt_norm, xt_l1, b_norm, base_apg](const ApgProblem&,
                                                         const ApgState& s) {
        InnerRecord rec;
        rec.cum_apg = base_apg + s.ell;
        rec.rel_error = (s.u - xt).norm() / xt_norm;
        rec.rel_feasibility = (op.apply_uncounted(s.u) - b).norm() / b_norm;
        rec.rel_optimality = std::abs(s.u.lpNorm<1>() - xt_l1) / xt_l1;
        report.inner.push_back(rec);
      };
    }

    const ApgOutcome out = apg_solve(sub, ell_max, 0.0, cb);
    report.n_apg += out.gradient_evals;
    x = out.x;
    tau_prev = out.tau_used;

    Vector ax;
    bool have_ax = out.ax_is_current;
    if (have_ax) ax = out.ax;
    bool noisy_stop = false;
    if (config.stop_mode == StopMode::Noisy) {
      if (!have_ax) {
        ax = op.apply(x);
        have_ax = true;
      }
      // ||A x - b|| <= sqrt(m) gamma in the original scaling
      noisy_stop = (ax - b).norm() * sigma0 <=
                   std::sqrt(static_cast<double>(op.rows())) * config.gamma;
    }

    OuterRecord row;
    row.k = k;
    row.lam = lam;
    row.eps = eps;
    row.tau = out.tau_used;
    row.theta_norm = theta.norm();
    row.eta_k = eta_k;
    row.step_l = step_l;
    row.xi = xi;
    row.inner = out.gradient_evals;
    row.ell_max = ell_max;
    row.exit = (out.exit_reason == ApgExit::OuterStop || noisy_stop)
                   ? 's'
                   : out.kind;
    row.subgrad_norm = out.subgrad_norm;
    report.outer.push_back(row);
    report.n_fal = k;

    if (out.exit_reason == ApgExit::OuterStop || noisy_stop) {
      converged = true;
      x_sol = x;
      break;
    }

    if (!have_ax) ax = op.apply(x);
    theta -= (ax - b) / lam;
    x_sol = x;
  }

  report.converged = converged;
  report.cap_exceeded = !converged;
  report.n_mat = op.multiply_count();
  report.metrics = evaluate(x_sol, instance);
  // dual for the original system: theta_bar^T (b_bar - A_bar x) =
  // (theta_bar / sigma0)^T (b - A x)
  report.theta = theta / sigma0;
  return {x_sol, report};
}

TheoreticalResult fal_solve_theoretical(const ProblemInstance& instance,
                                        double alpha, double eps_target,
                                        long inner_cap) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("fal_solve_theoretical: alpha outside (0,1)");

  const double scale = instance.op->sigma_max();
  const auto op = std::make_shared<ScaledOperator>(instance.op, 1.0 / scale);
  op->reset_multiply_count();
  const Vector b_bar = instance.b / scale;
  const Eigen::Index n = op->cols();

  Vector x = op->apply_adjoint(b_bar);
  if (x.lpNorm<Eigen::Infinity>() == 0.0)
    throw std::invalid_argument("fal_solve_theoretical: zero measurement");

  double eta0;
  if (op->orthogonal_rows()) {
    eta0 = x.lpNorm<1>();
  } else {
    const double ratio =
        static_cast<double>(op->rows()) / static_cast<double>(n);
    eta0 = b_bar.norm() / (1.0 - std::sqrt(ratio));
  }

  const double kappa = instance.op->sigma_max() / instance.op->sigma_min();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double c_coef =
      1.0 / (2.0 * std::max(1.0, eta0 + 4.5 * n * kappa * kappa));
  const double b1 = 2.0;  // eps^(1) / lam^(1)^2
  const double b2 = 2.0 * c_coef;
  const double b_theta =
      sqrt_n * kappa * (std::max(std::sqrt(2.0 * b1), b2) + 1.0);
  const double b_x = eta0 + 0.5 * b_theta * b_theta;  // lam^(1) = 1
  const double c_opt =
      std::max(0.5 * b_theta * b_theta + b1 * std::max(1.0, 2.0 * c_coef * b_x),
               0.5 * (sqrt_n * kappa + b_theta) * (sqrt_n * kappa + b_theta));

  TheoreticalResult result;
  BoundAudit& audit = result.audit;
  audit.n_fal_bound =
      static_cast<long>(
          std::ceil(std::log(8.0 * n * kappa * kappa / eps_target) /
                    std::log(1.0 / alpha))) +
      1;

  double lam = 1.0, eps = 2.0;
  Vector theta = Vector::Zero(op->rows());
  SolveReport& report = result.report;
  bool converged = false;

  const double xt_l1 =
      instance.x_true ? instance.x_true->lpNorm<1>()
                      : std::numeric_limits<double>::quiet_NaN();

  for (int k = 1; k <= static_cast<int>(audit.n_fal_bound); ++k) {
    const double eta_k = eta0 + 0.5 * lam * theta.squaredNorm();
    const double tau = c_coef * eps;
    long ell_max =
        ceil_cap((eta_k + x.norm()) * std::sqrt(2.0 / eps), inner_cap);

    ApgProblem sub{lam, op.get(), b_bar + lam * theta, eta_k, 1.0, x};
    const ApgOutcome out = apg_solve(sub, ell_max, tau, {});
    report.n_apg += out.gradient_evals;
    x = out.x;

    const Vector ax = out.ax_is_current ? out.ax : op->apply(x);
    const double feas = (ax - b_bar).norm();
    const double opt_bound = c_opt * lam;  // lam^(k) = alpha^(k-1)

    BoundAudit::Row arow;
    arow.k = k;
    arow.feasibility = feas;
    arow.feas_bound = 2.0 * b_theta * lam;
    arow.feas_ok = feas <= arow.feas_bound * (1.0 + 1e-9);
    arow.opt_bound = opt_bound;
    if (instance.x_true) {
      arow.opt_gap = std::abs(x.lpNorm<1>() - xt_l1);
      arow.opt_ok = arow.opt_gap <= opt_bound * (1.0 + 1e-9);
    } else {
      arow.opt_ok = true;
    }
    audit.rows.push_back(arow);

    OuterRecord row;
    row.k = k;
    row.lam = lam;
    row.eps = eps;
    row.tau = tau;
    row.theta_norm = theta.norm();
    row.eta_k = eta_k;
    row.step_l = 1.0;
    row.inner = out.gradient_evals;
    row.ell_max = ell_max;
    row.exit = out.kind;
    row.subgrad_norm = out.subgrad_norm;
    report.outer.push_back(row);
    report.n_fal = k;

    const bool opt_certified =
        instance.x_true ? arow.opt_gap <= eps_target : opt_bound <= eps_target;
    if (feas <= eps_target && opt_certified) {
      converged = true;
      break;
    }

    theta -= (ax - b_bar) / lam;
    lam *= alpha;
    eps *= alpha * alpha;
  }

  audit.all_pass = !audit.rows.empty();
  for (const auto& r : audit.rows)
    if (!r.feas_ok || !r.opt_ok) audit.all_pass = false;
  audit.n_fal_ok = converged && report.n_fal <= audit.n_fal_bound;

  report.converged = converged;
  report.cap_exceeded = !converged;
  report.n_mat = op->multiply_count();

  // Metrics in the original scaling: Ax = b iff A_bar x = b_bar.
  report.metrics = evaluate(x, instance);
  report.theta = theta;
  result.x = x;
  return result;
}

}  // namespace fal
