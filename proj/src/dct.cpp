#include "fal/dct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace fal {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Per-size twiddle tables: level ℓ covers sub-transforms of length n >> ℓ,
// storing 2*cos(pi*(2j+1)/(2*len)). Non-power-of-two sizes keep the explicit
// transform matrix instead.
struct Plan {
  int n;
  std::vector<std::vector<double>> twiddle;  // power-of-two path
  Eigen::MatrixXd dense;                     // fallback path

  explicit Plan(int size) : n(size) {
    if (is_pow2(n)) {
      for (int len = n; len >= 2; len >>= 1) {
        std::vector<double> row(len / 2);
        for (int j = 0; j < len / 2; ++j)
          row[j] = 2.0 * std::cos(kPi * (2 * j + 1) / (2.0 * len));
        twiddle.push_back(std::move(row));
      }
    } else {
      dense.resize(n, n);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          dense(k, j) = std::cos(kPi * (2 * j + 1) * k / (2.0 * n));
    }
  }
};

std::shared_ptr<const Plan> plan_for(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<Plan>(n);
  return slot;
}

// Unnormalized DCT-II, x -> C x, recursing on the even/odd split.
void fwd_rec(double* x, double* tmp, int n, const Plan& plan, int level) {
  if (n == 1) return;
  const int h = n / 2;
  const std::vector<double>& c = plan.twiddle[level];
  for (int j = 0; j < h; ++j) {
    tmp[j] = x[j] + x[n - 1 - j];
    tmp[h + j] = (x[j] - x[n - 1 - j]) / c[j];
  }
  fwd_rec(tmp, x, h, plan, level + 1);
  fwd_rec(tmp + h, x, h, plan, level + 1);
  for (int k = 0; k < h - 1; ++k) {
    x[2 * k] = tmp[k];
    x[2 * k + 1] = tmp[h + k] + tmp[h + k + 1];
  }
  x[n - 2] = tmp[h - 1];
  x[n - 1] = tmp[n - 1];
}

// Inverse of fwd_rec (unnormalized DCT-III up to the 1/2 factors below).
void inv_rec(double* x, double* tmp, int n, const Plan& plan, int level) {
  if (n == 1) return;
  const int h = n / 2;
  const std::vector<double>& c = plan.twiddle[level];
  for (int k = 0; k < h; ++k) tmp[k] = x[2 * k];
  tmp[n - 1] = x[n - 1];
  for (int k = h - 2; k >= 0; --k) tmp[h + k] = x[2 * k + 1] - tmp[h + k + 1];
  inv_rec(tmp, x, h, plan, level + 1);
  inv_rec(tmp + h, x, h, plan, level + 1);
  for (int j = 0; j < h; ++j) {
    x[j] = 0.5 * (tmp[j] + c[j] * tmp[h + j]);
    x[n - 1 - j] = 0.5 * (tmp[j] - c[j] * tmp[h + j]);
  }
}

}  // namespace

Eigen::VectorXd dct2(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return x;
  const auto plan = plan_for(n);
  Eigen::VectorXd y;
  if (is_pow2(n)) {
    y = x;
    Eigen::VectorXd tmp(n);
    fwd_rec(y.data(), tmp.data(), n, *plan, 0);
  } else {
    y = plan->dense * x;
  }
  const double s = std::sqrt(2.0 / n);
  y *= s;
  y[0] *= std::sqrt(0.5);
  return y;
}

Eigen::VectorXd idct2(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  if (n == 0) return y;
  const auto plan = plan_for(n);
  // Forward is y = S C x with S = diag(sqrt(1/n), sqrt(2/n), ...); invert as
  // x = C^{-1}(S^{-1} y). inv_rec is the exact algorithmic inverse of
  // fwd_rec; the dense path uses C^{-1} = C^T S^2.
  if (is_pow2(n)) {
    Eigen::VectorXd x = y * std::sqrt(n / 2.0);
    x[0] = y[0] * std::sqrt(static_cast<double>(n));
    Eigen::VectorXd tmp(n);
    inv_rec(x.data(), tmp.data(), n, *plan, 0);
    return x;
  }
  Eigen::VectorXd sy = y * std::sqrt(2.0 / n);
  sy[0] = y[0] * std::sqrt(1.0 / n);
  return plan->dense.transpose() * sy;
}

}  // namespace fal
