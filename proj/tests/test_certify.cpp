#include <doctest.h>

#include <cmath>

#include "fal/certify.hpp"
#include "fal/fal.hpp"
#include "fal/probgen.hpp"
#include "fal/rng.hpp"

using fal::Matrix;
using fal::ProblemInstance;
using fal::Vector;

namespace {

// small dense instance with a known-by-construction l1 minimizer check done
// via a high-accuracy solve
ProblemInstance small_instance(std::uint64_t seed) {
  fal::SignalSpec spec;
  spec.family = fal::Family::Dct100db;
  spec.n = 256;
  spec.m = 64;
  spec.s = 3;
  spec.seed = seed;
  return fal::gen_noiseless(spec);
}

}  // namespace

TEST_CASE("duality gap vanishes at a high-accuracy optimum") {
  const auto inst = small_instance(14);
  fal::FalConfig config;
  config.stop_mode = fal::StopMode::Noiseless;
  config.gamma = 1e-10;
  const auto result = fal::fal_solve(inst, config);

  const auto cert =
      fal::duality_gap_certificate(result.x, result.report.theta, inst);
  CHECK(cert.dual_feasibility <= 1.0 + 1e-12);
  CHECK(cert.primal_value == doctest::Approx(result.x.lpNorm<1>()));
  CHECK(cert.gap >= -1e-9 * cert.primal_value);
  // theta converges slowly in the inf-norm rescaling, so the certified gap
  // is looser than the primal accuracy itself
  CHECK(cert.gap <= 2e-3 * cert.primal_value);
}

TEST_CASE("theta = 0 gives dual value 0, so gap = ||x||_1") {
  const auto inst = small_instance(15);
  const Vector theta = Vector::Zero(inst.b.size());
  const auto cert = fal::duality_gap_certificate(*inst.x_true, theta, inst);
  CHECK(cert.dual_value == 0.0);
  CHECK(cert.gap == doctest::Approx(inst.x_true->lpNorm<1>()));
}

TEST_CASE("weak duality holds on feasible perturbations") {
  // Perturbing a feasible point inside the nullspace of A keeps feasibility;
  // the certified dual value must stay below every feasible ||x||_1.
  const auto inst = small_instance(16);
  fal::FalConfig config;
  config.stop_mode = fal::StopMode::Noiseless;
  config.gamma = 1e-8;
  const auto result = fal::fal_solve(inst, config);
  const auto cert =
      fal::duality_gap_certificate(result.x, result.report.theta, inst);

  fal::Rng rng(16, "nullspace");
  for (int trial = 0; trial < 20; ++trial) {
    Vector z(256);
    for (int i = 0; i < 256; ++i) z[i] = rng.normal();
    // project z onto null(A): z - A^T A z (orthonormal rows)
    const Vector zn =
        z - inst.op->apply_adjoint_uncounted(inst.op->apply_uncounted(z));
    const Vector feasible = *inst.x_true + zn;
    CHECK((inst.op->apply_uncounted(feasible) - inst.b).norm() <=
          1e-8 * inst.b.norm());
    CHECK(feasible.lpNorm<1>() >= cert.dual_value - 1e-6 * cert.dual_value);
  }
}

TEST_CASE("gradient norm audit") {
  const auto inst = small_instance(17);
  fal::FalConfig config;
  config.stop_mode = fal::StopMode::Noiseless;
  config.gamma = 1e-8;
  const auto result = fal::fal_solve(inst, config);
  const double lam = result.report.outer.back().lam;
  const double eps = result.report.outer.back().eps;

  const auto audit =
      fal::gradient_norm_audit(result.x, lam, result.report.theta, eps, inst);
  CHECK(audit.bound_inf ==
        doctest::Approx(std::sqrt(2.0 * eps) * inst.op->sigma_max() + lam));
  CHECK(audit.bound_l2 == doctest::Approx(std::sqrt(256.0) /
                                          inst.op->sigma_min() *
                                          audit.bound_inf));
  CHECK(audit.lhs_inf <= audit.lhs_l2 + 1e-15);
  CHECK(audit.pass == (audit.lhs_inf <= audit.bound_inf &&
                       audit.lhs_l2 <= audit.bound_l2));

  // a gross perturbation of x must blow past the bound
  Vector xbad = result.x;
  xbad[0] += 1e6;
  const auto bad =
      fal::gradient_norm_audit(xbad, lam, result.report.theta, eps, inst);
  CHECK(!bad.pass);
}

TEST_CASE("l1 projection oracle hand case") {
  Vector y(2);
  y << 3, 1;
  const Vector p = fal::l1_projection_oracle(y, 0.0, 1.0);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(p[1]) <= 1e-9);
}
