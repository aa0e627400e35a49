#include "fal/probgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fal/rng.hpp"

namespace fal {

namespace {

void check_shape(const SignalSpec& spec) {
  if (spec.s < 0 || spec.s > spec.m || spec.m > spec.n || spec.m < 1)
    throw std::invalid_argument("SignalSpec: need s <= m <= n, m >= 1");
}

std::shared_ptr<PartialDctOperator> make_dct_operator(const SignalSpec& spec) {
  Rng rng(spec.seed, "rows");
  return std::make_shared<PartialDctOperator>(
      spec.n, rng.distinct_indices(spec.m, spec.n));
}

}  // namespace

ProblemInstance gen_noiseless(const SignalSpec& spec) {
  check_shape(spec);
  if (spec.s < 2)
    throw std::invalid_argument(
        "gen_noiseless: dynamic-range rescaling needs s >= 2");

  Rng support_rng(spec.seed, "support");
  const std::vector<int> lambda = support_rng.distinct_indices(spec.s, spec.n);

  Rng sign_rng(spec.seed, "sign");
  Rng mag_rng(spec.seed, "theta2");
  std::vector<double> theta2(spec.s);
  for (double& t : theta2) t = mag_rng.uniform();
  const auto [lo_it, hi_it] = std::minmax_element(theta2.begin(), theta2.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) throw std::runtime_error("gen_noiseless: degenerate magnitudes");

  Vector x_true = Vector::Zero(spec.n);
  for (int i = 0; i < spec.s; ++i) {
    const double sign = (sign_rng.next_u64() & 1u) ? 1.0 : -1.0;
    // Rescaled exponent in [0,1]: min magnitude 1, max 10^5 exactly (100 dB).
    const double e = (theta2[i] - lo) / (hi - lo);
    x_true[lambda[i]] = sign * std::pow(10.0, 5.0 * e);
  }

  ProblemInstance inst;
  inst.op = make_dct_operator(spec);
  inst.b = inst.op->apply_uncounted(x_true);
  inst.x_true = std::move(x_true);
  return inst;
}

ProblemInstance gen_noisy(const SignalSpec& spec) {
  check_shape(spec);
  if (spec.s < 1) throw std::invalid_argument("gen_noisy: s >= 1 required");

  Rng support_rng(spec.seed, "support");
  const std::vector<int> lambda = support_rng.distinct_indices(spec.s, spec.n);

  Rng theta_rng(spec.seed, "theta");
  Vector x_true = Vector::Zero(spec.n);
  for (int i = 0; i < spec.s; ++i) x_true[lambda[i]] = theta_rng.normal();

  Rng mat_rng(spec.seed, "matrix");
  Matrix a(spec.m, spec.n);
  for (int i = 0; i < spec.m; ++i)
    for (int j = 0; j < spec.n; ++j) a(i, j) = mat_rng.normal();

  const double rho =
      std::isinf(spec.snr_db)
          ? 0.0
          : std::sqrt(spec.s * std::pow(10.0, -spec.snr_db / 10.0));

  ProblemInstance inst;
  inst.op = std::make_shared<DenseOperator>(
      std::move(a), estimate_sigma_min_gaussian(spec.m, spec.n));
  inst.b = inst.op->apply_uncounted(x_true);
  if (rho > 0.0) {
    Rng noise_rng(spec.seed, "noise");
    for (int i = 0; i < spec.m; ++i) inst.b[i] += rho * noise_rng.normal();
  }
  inst.x_true = std::move(x_true);
  inst.rho = rho;
  inst.delta = std::sqrt(spec.m + 2.0 * std::sqrt(2.0 * spec.m)) * rho;
  return inst;
}

ProblemInstance gen_hard(const SignalSpec& spec) {
  check_shape(spec);
  if (spec.plan.empty()) throw std::invalid_argument("gen_hard: empty plan");
  int total = 0;
  for (const auto& term : spec.plan) {
    if (!(term.magnitude > 0.0) || term.count < 1)
      throw std::invalid_argument("gen_hard: bad plan term");
    total += term.count;
  }
  if (total != spec.s)
    throw std::invalid_argument("gen_hard: plan counts must sum to s");

  Rng support_rng(spec.seed, "support");
  const std::vector<int> lambda = support_rng.distinct_indices(spec.s, spec.n);

  Rng sign_rng(spec.seed, "sign");
  Vector x_true = Vector::Zero(spec.n);
  int pos = 0;
  for (const auto& term : spec.plan)
    for (int c = 0; c < term.count; ++c) {
      const double sign = (sign_rng.next_u64() & 1u) ? 1.0 : -1.0;
      x_true[lambda[pos++]] = sign * term.magnitude;
    }

  ProblemInstance inst;
  inst.op = make_dct_operator(spec);
  inst.b = inst.op->apply_uncounted(x_true);
  inst.x_true = std::move(x_true);
  return inst;
}

ProblemInstance generate(const SignalSpec& spec) {
  switch (spec.family) {
    case Family::Dct100db:
      return gen_noiseless(spec);
    case Family::GaussianNoisy:
      return gen_noisy(spec);
    case Family::HardMagnitude:
      return gen_hard(spec);
  }
  throw std::invalid_argument("generate: unknown family");
}

MetricRow evaluate(const Vector& x_sol, const ProblemInstance& instance) {
  MetricRow row;
  row.residual = (instance.op->apply_uncounted(x_sol) - instance.b).norm();
  row.x_l1 = x_sol.lpNorm<1>();
  if (!instance.x_true) return row;

  const Vector& xt = *instance.x_true;
  row.has_truth = true;
  row.xtrue_l1 = xt.lpNorm<1>();
  row.rel_l1_gap = std::abs(row.x_l1 - row.xtrue_l1) / row.xtrue_l1;
  row.rel_l2_error = (x_sol - xt).norm() / xt.norm();
  double plus = 0.0, zero = 0.0;
  for (Eigen::Index i = 0; i < xt.size(); ++i) {
    const double d = std::abs(x_sol[i] - xt[i]);
    if (xt[i] != 0.0)
      plus = std::max(plus, d);
    else
      zero = std::max(zero, std::abs(x_sol[i]));
  }
  row.inf_err_plus = plus;
  row.inf_err_zero = zero;
  return row;
}

std::string family_name(Family family) {
  switch (family) {
    case Family::Dct100db:
      return "dct-100db";
    case Family::GaussianNoisy:
      return "gaussian-noisy";
    case Family::HardMagnitude:
      return "hard-magnitude";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "dct-100db") return Family::Dct100db;
  if (name == "gaussian-noisy") return Family::GaussianNoisy;
  if (name == "hard-magnitude" || name == "hard") return Family::HardMagnitude;
  throw std::invalid_argument("unknown family: " + name);
}

}  // namespace fal
