#include "fal/certify.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "fal/prox.hpp"

namespace fal {

Certificate duality_gap_certificate(const Vector& x, const Vector& theta,
                                    const ProblemInstance& instance) {
  const LinearOperator& op = *instance.op;
  Certificate cert;
  const Vector at_theta = op.apply_adjoint_uncounted(theta);
  const double scale = std::max(1.0, at_theta.lpNorm<Eigen::Infinity>());
  cert.dual_point = theta / scale;
  cert.dual_feasibility = at_theta.lpNorm<Eigen::Infinity>() / scale;
  cert.dual_value = instance.b.dot(cert.dual_point);
  cert.primal_value = x.lpNorm<1>();
  cert.gap = cert.primal_value - cert.dual_value;
  return cert;
}

GradientAudit gradient_norm_audit(const Vector& x, double lam,
                                  const Vector& theta, double eps,
                                  const ProblemInstance& instance) {
  const LinearOperator& op = *instance.op;
  GradientAudit audit;
  const Vector r = op.apply_uncounted(x) - instance.b - lam * theta;
  const Vector g = op.apply_adjoint_uncounted(r);
  audit.lhs_inf = g.lpNorm<Eigen::Infinity>();
  audit.lhs_l2 = g.norm();
  audit.bound_inf = std::sqrt(2.0 * eps) * op.sigma_max() + lam;
  audit.bound_l2 =
      std::sqrt(static_cast<double>(op.cols())) / op.sigma_min() * audit.bound_inf;
  audit.pass = audit.lhs_inf <= audit.bound_inf * (1.0 + 1e-9) &&
               audit.lhs_l2 <= audit.bound_l2 * (1.0 + 1e-9);
  return audit;
}

Vector l1_projection_oracle(const Vector& y, double lam, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("l1_projection_oracle: eta <= 0");
  const double at_zero = shrink(y, lam).lpNorm<1>();
  assert(at_zero > eta && "precondition: unconstrained shrinkage infeasible");
  (void)at_zero;

  double lo = 0.0, hi = y.lpNorm<Eigen::Infinity>();
  // ||shrink(y, lam + alpha)||_1 is continuous, strictly decreasing until it
  // hits zero; bisect to 1e-12 (absolute on alpha and on the norm value).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = shrink(y, lam + mid).lpNorm<1>();
    if (val > eta)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
  }
  return shrink(y, lam + 0.5 * (lo + hi));
}

}  // namespace fal
