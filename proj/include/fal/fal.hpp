#pragma once

// Outer augmented Lagrangian loop for noiseless basis pursuit: subproblem
// construction, dual updates, adaptive parameter schedules, stopping
// variants, and the theoretical geometric schedule with its bound audit.

#include <vector>

#include "fal/apg.hpp"
#include "fal/problem.hpp"

namespace fal {

enum class StopMode { Noiseless, Oracle, Noisy };

struct FalConfig {
  double gamma = 1e-2;  // FALstop tolerance
  // First-iteration coefficients (the sparsity ratio xi^(1) is undefined, so
  // the 1 -> 2 parameter transition and L^(1) use these).
  double c_lambda_init = 0.4;
  double c_tau_init = 0.4;
  double t_init = 2.0;
  double c_hat_tau = 0.9;
  StopMode stop_mode = StopMode::Noiseless;
  int max_outer = 200;
  double alpha = 0.5;      // geometric ratio for the theoretical schedule
  bool long_steps = true;  // false forces t = 1 (guaranteed step size)
  bool record_inner = false;  // per-gradient-eval error trace (needs x_true)
  std::optional<Vector> warm_start;  // x^(0); defaults to A^T b
};

struct OuterRecord {
  int k = 0;
  double lam = 0, eps = 0, tau = 0, theta_norm = 0, eta_k = 0, step_l = 0;
  double xi = 0;
  long inner = 0;  // gradient evaluations consumed by this subproblem
  long ell_max = 0;
  char exit = '?';  // 'v' subgradient, 'u' cap, 's' FALstop
  double subgrad_norm = 0;
};

struct InnerRecord {
  long cum_apg = 0;
  double rel_error = 0, rel_feasibility = 0, rel_optimality = 0;
};

struct SolveReport {
  std::vector<OuterRecord> outer;
  std::vector<InnerRecord> inner;
  long n_fal = 0, n_apg = 0, n_mat = 0;
  bool converged = false;
  bool cap_exceeded = false;
  MetricRow metrics;
  Vector theta;  // final dual multiplier (certificate input)
};

struct FalResult {
  Vector x;
  SolveReport report;
};

// eta: l1 bound on x*. Orthogonal rows: ||A^T b||_1 (= ||least-norm point||_1);
// dense Gaussian: ||b||_2 / (1 - sqrt(m/n)).
double eta_bound(const ProblemInstance& instance);

// Piecewise-constant decay schedules over the sparsity ratio xi.
double schedule_c_lambda(double xi);
double schedule_t(double xi);

FalResult fal_solve(const ProblemInstance& instance, const FalConfig& config);

struct BoundAudit {
  struct Row {
    int k = 0;
    double feasibility = 0;    // ||A_bar x^(k) - b_bar||_2
    double feas_bound = 0;     // 2 B_theta lam^(k)
    double opt_gap = 0;        // | ||x^(k)||_1 - ||x*||_1 |  (NaN w/o truth)
    double opt_bound = 0;      // 8 n kappa^2 alpha^(k-1)
    bool feas_ok = false;
    bool opt_ok = false;
  };
  std::vector<Row> rows;
  bool all_pass = false;
  long n_fal_bound = 0;  // ceil(log_{1/alpha}(8 n kappa^2 / eps)) + 1
  bool n_fal_ok = false;
};

struct TheoreticalResult {
  Vector x;
  SolveReport report;
  BoundAudit audit;
};

// Theorem-3 construction: rescale (A,b) by 1/sigma_max, lam^(1)=1, eps^(1)=2,
// geometric decay by alpha, tau^(k) = eps^(k)/(2 max{1, eta + 4.5 n kappa^2}).
// Stops once the iterate is eps_target-feasible and eps_target-optimal
// (against the known x* when available, else via the geometric bound).
// inner_cap is a safety valve on ell_max per subproblem.
TheoreticalResult fal_solve_theoretical(const ProblemInstance& instance,
                                        double alpha, double eps_target,
                                        long inner_cap = 500000);

}  // namespace fal
