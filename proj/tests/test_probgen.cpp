#include <doctest.h>

#include <cmath>

#include "fal/probgen.hpp"

using fal::Family;
using fal::SignalSpec;
using fal::Vector;

namespace {

SignalSpec base_spec(Family f, int n, int m, int s, std::uint64_t seed) {
  SignalSpec spec;
  spec.family = f;
  spec.n = n;
  spec.m = m;
  spec.s = s;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  const auto spec = base_spec(Family::Dct100db, 512, 128, 6, 99);
  const auto a = fal::generate(spec);
  const auto b = fal::generate(spec);
  CHECK((a.b - b.b).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((*a.x_true - *b.x_true).lpNorm<Eigen::Infinity>() == 0.0);

  auto other = spec;
  other.seed = 100;
  const auto c = fal::generate(other);
  CHECK((a.b - c.b).lpNorm<Eigen::Infinity>() != 0.0);
}

TEST_CASE("100 dB family: exact dynamic range and support size") {
  for (const std::uint64_t seed : {0ull, 1ull, 7ull}) {
    const auto inst =
        fal::gen_noiseless(base_spec(Family::Dct100db, 1024, 256, 12, seed));
    const Vector& x = *inst.x_true;
    int nnz = 0;
    double mn = std::numeric_limits<double>::infinity(), mx = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) continue;
      ++nnz;
      mn = std::min(mn, std::abs(x[i]));
      mx = std::max(mx, std::abs(x[i]));
    }
    CHECK(nnz == 12);
    CHECK(mn == 1.0);      // min magnitude rescaled to exactly 10^0
    CHECK(mx == 1e5);      // max magnitude exactly 10^5: 100 dB range
    CHECK(inst.op->orthogonal_rows());
    CHECK(inst.op->rows() == 256);
    CHECK(inst.op->cols() == 1024);
    // b really is A x*
    CHECK((inst.op->apply_uncounted(x) - inst.b).lpNorm<Eigen::Infinity>() <=
          1e-9 * inst.b.lpNorm<Eigen::Infinity>());
  }
  CHECK_THROWS_AS(
      fal::gen_noiseless(base_spec(Family::Dct100db, 1024, 256, 1, 0)),
      std::invalid_argument);
}

TEST_CASE("noisy family: rho formula and empirical SNR") {
  // s = 100, SNR = 20 dB -> rho^2 = 100 * 10^-2 = 1
  auto spec = base_spec(Family::GaussianNoisy, 1024, 256, 100, 5);
  spec.snr_db = 20.0;
  const auto inst = fal::gen_noisy(spec);
  CHECK(inst.rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inst.delta ==
        doctest::Approx(std::sqrt(256.0 + 2.0 * std::sqrt(512.0)) * inst.rho));
  CHECK(!inst.op->orthogonal_rows());

  // infinite SNR -> exact measurements
  auto clean = spec;
  clean.snr_db = std::numeric_limits<double>::infinity();
  const auto ci = fal::gen_noisy(clean);
  CHECK(ci.rho == 0.0);
  CHECK((ci.op->apply_uncounted(*ci.x_true) - ci.b).lpNorm<Eigen::Infinity>() <=
        1e-10);

  // empirical SNR = 10 log10(s / mean(w^2)) within 1.5 dB of the target
  for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    auto sp = base_spec(Family::GaussianNoisy, 2048, 512, 51, seed);
    sp.snr_db = 30.0;
    const auto ni = fal::gen_noisy(sp);
    const Vector noise = ni.b - ni.op->apply_uncounted(*ni.x_true);
    const double snr_emp =
        10.0 * std::log10(51.0 / (noise.squaredNorm() / noise.size()));
    CHECK(std::abs(snr_emp - 30.0) <= 1.5);
  }
}

TEST_CASE("hard-magnitude family: exact l1 mass per plan") {
  auto spec = base_spec(Family::HardMagnitude, 512, 128, 38, 3);
  spec.plan = {{1e5, 33}, {1.0, 5}};
  const auto inst = fal::gen_hard(spec);
  CHECK(inst.x_true->lpNorm<1>() == doctest::Approx(3300005.0).epsilon(1e-12));
  int nnz = 0;
  for (Eigen::Index i = 0; i < inst.x_true->size(); ++i)
    if ((*inst.x_true)[i] != 0.0) ++nnz;
  CHECK(nnz == 38);

  auto spec2 = base_spec(Family::HardMagnitude, 512, 102, 26, 3);
  spec2.plan = {{1e4, 13}, {1.0, 12}, {1e-2, 1}};
  const auto inst2 = fal::gen_hard(spec2);
  CHECK(inst2.x_true->lpNorm<1>() ==
        doctest::Approx(130012.01).epsilon(1e-12));

  auto bad = spec;
  bad.plan.clear();
  CHECK_THROWS_AS(fal::gen_hard(bad), std::invalid_argument);
  auto mismatch = spec;
  mismatch.s = 10;  // plan counts sum to 38
  CHECK_THROWS_AS(fal::gen_hard(mismatch), std::invalid_argument);
}

TEST_CASE("family names round-trip") {
  for (const Family f :
       {Family::Dct100db, Family::GaussianNoisy, Family::HardMagnitude})
    CHECK(fal::family_from_name(fal::family_name(f)) == f);
  CHECK(fal::family_from_name("hard") == Family::HardMagnitude);
  CHECK_THROWS_AS(fal::family_from_name("nope"), std::invalid_argument);
}

TEST_CASE("evaluate: exact solution and zero solution") {
  const auto inst =
      fal::gen_noiseless(base_spec(Family::Dct100db, 512, 128, 5, 8));

  const auto exact = fal::evaluate(*inst.x_true, inst);
  CHECK(exact.has_truth);
  CHECK(exact.rel_l1_gap == 0.0);
  CHECK(exact.inf_err_plus == 0.0);
  CHECK(exact.inf_err_zero == 0.0);
  CHECK(exact.rel_l2_error == 0.0);
  CHECK(exact.residual <= 1e-9 * inst.b.norm());
  CHECK(exact.x_l1 == exact.xtrue_l1);

  const auto zero = fal::evaluate(Vector::Zero(512), inst);
  CHECK(zero.rel_l1_gap == doctest::Approx(1.0));
  CHECK(zero.rel_l2_error == doctest::Approx(1.0));
  CHECK(zero.inf_err_zero == 0.0);
  CHECK(zero.inf_err_plus ==
        doctest::Approx(inst.x_true->lpNorm<Eigen::Infinity>()));
  CHECK(zero.residual == doctest::Approx(inst.b.norm()));
}
