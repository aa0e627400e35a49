#include <doctest.h>

#include <cmath>

#include "fal/apg.hpp"
#include "fal/rng.hpp"

using fal::ApgProblem;
using fal::ApgState;
using fal::Matrix;
using fal::Vector;

namespace {

// 1-D helper: f(x) = 0.5 (x - target)^2 via a 1x1 identity operator.
struct OneDim {
  fal::DenseOperator op{Matrix::Identity(1, 1)};
  ApgProblem problem(double target, double lam, double eta, double anchor) {
    Vector rhs(1), anc(1);
    rhs << target;
    anc << anchor;
    return ApgProblem{lam, &op, rhs, eta, 1.0, anc};
  }
};

double objective(const ApgProblem& p, const Vector& x) {
  return p.lam * x.lpNorm<1>() +
         0.5 * (p.op->apply_uncounted(x) - p.shifted_rhs).squaredNorm();
}

// Proximal model at the extrapolation point v of the step just taken:
// m(z) = f(v) + <grad f(v), z - v> + L/2 ||z - v||^2 + lam ||z||_1.
// The u-step minimizes it over the ball, so P(u) <= m(z) for all feasible z.
double model_value(const ApgProblem& p, const ApgState& s, const Vector& z) {
  const double fv = 0.5 * (s.av - p.shifted_rhs).squaredNorm();
  return fv + s.grad_v.dot(z - s.v) + 0.5 * p.L * (z - s.v).squaredNorm() +
         p.lam * z.lpNorm<1>();
}

}  // namespace

TEST_CASE("theta recurrence") {
  CHECK(fal::theta_next(1.0) ==
        doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  // algebraic identity: t+^2 = (1 - t+) t^2
  double t = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double tn = fal::theta_next(t);
    CHECK(std::abs(tn * tn - (1.0 - tn) * t * t) <= 1e-14);
    CHECK(tn > 0.0);
    CHECK(tn < t);
    t = tn;
  }
  // decay rate: theta^(l) <= 2/(l+2)
  t = 1.0;
  for (int l = 0; l < 10000; ++l) {
    CHECK(t <= 2.0 / (l + 2) + 1e-15);
    t = fal::theta_next(t);
  }
  CHECK_THROWS_AS(fal::theta_next(0.0), std::invalid_argument);
  CHECK_THROWS_AS(fal::theta_next(1.5), std::invalid_argument);
}

TEST_CASE("1-D quadratic: unconstrained, shrunk, and boundary limits") {
  OneDim fixture;

  // lam=0, big eta: converge to the target
  {
    auto p = fixture.problem(2.0, 0.0, 10.0, 0.0);
    ApgState s;
    fal::apg_init(p, s);
    for (int i = 0; i < 60; ++i) fal::apg_step(p, s);
    CHECK(std::abs(s.u[0] - 2.0) <= 1e-8);
  }
  // lam=1: limit = shrink(2,1) = 1
  {
    auto p = fixture.problem(2.0, 1.0, 10.0, 0.0);
    ApgState s;
    fal::apg_init(p, s);
    for (int i = 0; i < 200; ++i) fal::apg_step(p, s);
    CHECK(std::abs(s.u[0] - 1.0) <= 1e-8);
  }
  // lam=0, eta=0.5: limit on the boundary
  {
    auto p = fixture.problem(2.0, 0.0, 0.5, 0.0);
    ApgState s;
    fal::apg_init(p, s);
    for (int i = 0; i < 200; ++i) fal::apg_step(p, s);
    CHECK(std::abs(s.u[0] - 0.5) <= 1e-8);
  }
}

TEST_CASE("anchor at the minimizer returns immediately") {
  OneDim fixture;
  auto p = fixture.problem(2.0, 1e-6, 10.0, 2.0);
  // subgradient at v^(0) = anchor = minimizer of f is ~0
  const auto out = fal::apg_solve(p, 100, 1e-6);
  CHECK(out.exit_reason == fal::ApgExit::Subgradient);
  CHECK(out.kind == 'v');
  CHECK(out.gradient_evals == 1);
  CHECK(std::abs(out.x[0] - 2.0) <= 1e-9);
}

TEST_CASE("Lemma 1 gap bound on random dense subproblems") {
  fal::Rng rng(31, "lemma1");
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = Matrix::NullaryExpr(10, 30, [&](Eigen::Index, Eigen::Index) {
      return rng.normal();
    });
    fal::DenseOperator op(a);
    Vector rhs(10), anchor(30);
    for (int i = 0; i < 10; ++i) rhs[i] = rng.normal();
    for (int i = 0; i < 30; ++i) anchor[i] = 0.2 * rng.normal();
    const double lam = 0.1 + 0.4 * rng.uniform();
    const double eta = 5.0 + 5.0 * rng.uniform();
    const double L = op.sigma_max() * op.sigma_max();
    ApgProblem p{lam, &op, rhs, eta, L, anchor};

    // long plain proximal-gradient run as the minimizer oracle
    Vector xs = anchor;
    for (int i = 0; i < 100000; ++i) {
      const Vector g = op.apply_adjoint_uncounted(op.apply_uncounted(xs) - rhs);
      xs = fal::constrained_shrink(xs - g / L, lam / L, eta).x;
    }
    const double fstar = objective(p, xs);
    const double h_star = 0.5 * (xs - anchor).squaredNorm();

    for (const double eps : {1e-2, 1e-4}) {
      const long ell = static_cast<long>(
          std::ceil(std::sqrt(4.0 * L * h_star / eps)));
      ApgState s;
      fal::apg_init(p, s);
      for (long i = 0; i < std::max(ell, 1L); ++i) fal::apg_step(p, s);
      const double gap = objective(p, s.u) - fstar;
      CHECK(gap <= eps * 1.1 + 1e-12);
    }
  }
}

TEST_CASE("per-step descent: P(u^(l+1)) <= model(u_hat^(l+1)) every step") {
  fal::Rng rng(32, "hmono");
  Matrix a = Matrix::NullaryExpr(10, 30, [&](Eigen::Index, Eigen::Index) {
    return rng.normal();
  });
  fal::DenseOperator op(a);
  Vector rhs(10), anchor(30);
  for (int i = 0; i < 10; ++i) rhs[i] = rng.normal();
  anchor.setZero();
  const double L = op.sigma_max() * op.sigma_max();
  ApgProblem p{0.3, &op, rhs, 8.0, L, anchor};

  ApgState s;
  fal::apg_init(p, s);
  for (int l = 0; l < 300; ++l) {
    fal::apg_step(p, s);
    // u_hat^(l+1) = (1 - theta^(l)) u^(l) + theta^(l) w^(l+1); after the step
    // u_prev = u^(l), vartheta_prev = theta^(l), w = w^(l+1), u = u^(l+1).
    const Vector u_hat =
        (1.0 - s.vartheta_prev) * s.u_prev + s.vartheta_prev * s.w;
    CHECK(u_hat.lpNorm<1>() <= 8.0 + 1e-9);  // u_hat is feasible (convexity)
    CHECK(objective(p, s.u) <= model_value(p, s, u_hat) + 1e-9);
    CHECK(model_value(p, s, s.u) <= model_value(p, s, u_hat) + 1e-9);
  }
}

TEST_CASE("iterates stay inside the l1 ball and consume 2 applications each") {
  fal::Rng rng(33, "feas");
  Matrix a = Matrix::NullaryExpr(8, 20, [&](Eigen::Index, Eigen::Index) {
    return rng.normal();
  });
  fal::DenseOperator op(a);
  Vector rhs(8);
  for (int i = 0; i < 8; ++i) rhs[i] = rng.normal();
  const double L = op.sigma_max() * op.sigma_max();
  ApgProblem p{0.2, &op, rhs, 3.0, L, Vector::Zero(20)};

  op.reset_multiply_count();
  ApgState s;
  fal::apg_init(p, s);
  for (int l = 0; l < 50; ++l) {
    fal::apg_step(p, s);
    CHECK(s.u.lpNorm<1>() <= 3.0 + 1e-9);
    CHECK(s.w.lpNorm<1>() <= 3.0 + 1e-9);
    CHECK(op.multiply_count() == 2 * (l + 1));
  }
}

TEST_CASE("iteration cap returns u, subgradient returns v") {
  fal::Rng rng(34, "exit");
  Matrix a = Matrix::NullaryExpr(6, 15, [&](Eigen::Index, Eigen::Index) {
    return rng.normal();
  });
  fal::DenseOperator op(a);
  Vector rhs(6);
  for (int i = 0; i < 6; ++i) rhs[i] = rng.normal();
  const double L = op.sigma_max() * op.sigma_max();
  ApgProblem p{0.2, &op, rhs, 3.0, L, Vector::Zero(15)};

  const auto capped = fal::apg_solve(p, 5, 0.0);
  CHECK(capped.exit_reason == fal::ApgExit::IterationCap);
  CHECK(capped.kind == 'u');
  CHECK(capped.gradient_evals == 5);

  const auto stopped = fal::apg_solve(p, 100000, 1e-6);
  CHECK(stopped.exit_reason == fal::ApgExit::Subgradient);
  CHECK(stopped.kind == 'v');
  CHECK(stopped.subgrad_norm <= 1e-6);
  CHECK(stopped.ax_is_current);
  CHECK((stopped.ax - op.apply_uncounted(stopped.x)).norm() <= 1e-12);
}
