#include "fal/linops.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "fal/dct.hpp"
#include "fal/rng.hpp"

namespace fal {

namespace {
void check_input(const Vector& v, Eigen::Index expect, const char* who) {
  if (v.size() != expect) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (!v.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite input");
}
}  // namespace

Vector LinearOperator::apply(const Vector& x) const {
  check_input(x, n_, "apply");
  count_.fetch_add(1, std::memory_order_relaxed);
  return forward(x);
}

Vector LinearOperator::apply_adjoint(const Vector& y) const {
  check_input(y, m_, "apply_adjoint");
  count_.fetch_add(1, std::memory_order_relaxed);
  return adjoint(y);
}

Vector LinearOperator::apply_uncounted(const Vector& x) const {
  check_input(x, n_, "apply");
  return forward(x);
}

Vector LinearOperator::apply_adjoint_uncounted(const Vector& y) const {
  check_input(y, m_, "apply_adjoint");
  return adjoint(y);
}

PartialDctOperator::PartialDctOperator(int n, std::vector<int> row_indices)
    : LinearOperator(static_cast<Eigen::Index>(row_indices.size()), n, "partial-dct"),
      rows_(std::move(row_indices)) {
  if (rows_.empty() || rows_.size() > static_cast<std::size_t>(n))
    throw std::invalid_argument("PartialDctOperator: bad row count");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] < 0 || rows_[i] >= n)
      throw std::invalid_argument("PartialDctOperator: row index out of range");
    if (i > 0 && rows_[i] <= rows_[i - 1])
      throw std::invalid_argument("PartialDctOperator: rows must be strictly increasing");
  }
  sigma_max_ = 1.0;
  sigma_min_ = 1.0;
  orthogonal_rows_ = true;
}

Vector PartialDctOperator::forward(const Vector& x) const {
  const Vector full = dct2(x);
  Vector y(m_);
  for (Eigen::Index i = 0; i < m_; ++i) y[i] = full[rows_[i]];
  return y;
}

Vector PartialDctOperator::adjoint(const Vector& y) const {
  Vector full = Vector::Zero(n_);
  for (Eigen::Index i = 0; i < m_; ++i) full[rows_[i]] = y[i];
  return idct2(full);
}

DenseOperator::DenseOperator(Matrix a, double sigma_min_hint)
    : LinearOperator(a.rows(), a.cols(), "dense"), a_(std::move(a)) {
  if (m_ == 0 || n_ == 0 || m_ > n_)
    throw std::invalid_argument("DenseOperator: need 1 <= m <= n");
  orthogonal_rows_ = false;
  sigma_max_ = estimate_sigma_max(*this);
  if (sigma_min_hint > 0.0) {
    sigma_min_ = sigma_min_hint;
  } else if (m_ * n_ <= 200000) {
    Eigen::JacobiSVD<Matrix> svd(a_);
    sigma_min_ = svd.singularValues()(m_ - 1);
  } else {
    sigma_min_ = estimate_sigma_min_gaussian(m_, n_);
  }
}

Vector DenseOperator::forward(const Vector& x) const { return a_ * x; }

Vector DenseOperator::adjoint(const Vector& y) const { return a_.transpose() * y; }

ScaledOperator::ScaledOperator(std::shared_ptr<const LinearOperator> base, double factor)
    : LinearOperator(base->rows(), base->cols(), base->kind()),
      base_(std::move(base)),
      factor_(factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("ScaledOperator: factor <= 0");
  sigma_max_ = base_->sigma_max() * factor_;
  sigma_min_ = base_->sigma_min() * factor_;
  orthogonal_rows_ = base_->orthogonal_rows() && factor_ == 1.0;
}

Vector ScaledOperator::forward(const Vector& x) const {
  return factor_ * base_->apply_uncounted(x);
}

Vector ScaledOperator::adjoint(const Vector& y) const {
  return factor_ * base_->apply_adjoint_uncounted(y);
}

double estimate_sigma_max(const LinearOperator& op, bool* converged) {
  if (converged) *converged = true;
  if (op.orthogonal_rows()) return 1.0;

  Rng rng(0x5ee0, "power-iteration");
  Vector v(op.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  v.normalize();

  double value = 0.0;
  bool ok = false;
  for (int it = 0; it < 500; ++it) {
    Vector z = op.apply_adjoint_uncounted(op.apply_uncounted(v));
    const double nz = z.norm();
    if (nz == 0.0) return 0.0;  // degenerate; full row rank assumed upstream
    const double next = std::sqrt(nz);
    if (it > 0 && std::abs(next - value) <= 1e-8 * next) {
      value = next;
      ok = true;
      break;
    }
    value = next;
    v = z / nz;
  }
  if (!ok && converged) *converged = false;
  return value;
}

double estimate_sigma_min_gaussian(Eigen::Index m, Eigen::Index n) {
  if (m >= n) throw std::invalid_argument("estimate_sigma_min_gaussian: need m < n");
  const double ratio = static_cast<double>(m) / static_cast<double>(n);
  return (1.0 - std::sqrt(ratio)) * std::sqrt(static_cast<double>(n));
}

}  // namespace fal
