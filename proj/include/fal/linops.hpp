#pragma once

// Matrix-free linear operator abstraction with a fast partial-DCT
// implementation, a dense implementation, spectral estimates, and
// matrix-vector multiply accounting.

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  // Counted applications; the counter is the solver's nMat metric.
  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;

  // Uncounted applications, for metrics/certificates/diagnostics that must
  // not perturb the cost accounting.
  Vector apply_uncounted(const Vector& x) const;
  Vector apply_adjoint_uncounted(const Vector& y) const;

  Eigen::Index rows() const { return m_; }
  Eigen::Index cols() const { return n_; }
  const std::string& kind() const { return kind_; }
  double sigma_max() const { return sigma_max_; }
  double sigma_min() const { return sigma_min_; }
  bool orthogonal_rows() const { return orthogonal_rows_; }

  long multiply_count() const { return count_.load(std::memory_order_relaxed); }
  void reset_multiply_count() const { count_.store(0, std::memory_order_relaxed); }

 protected:
  LinearOperator(Eigen::Index m, Eigen::Index n, std::string kind)
      : m_(m), n_(n), kind_(std::move(kind)) {}

  virtual Vector forward(const Vector& x) const = 0;
  virtual Vector adjoint(const Vector& y) const = 0;

  Eigen::Index m_;
  Eigen::Index n_;
  std::string kind_;
  double sigma_max_ = 1.0;
  double sigma_min_ = 1.0;
  bool orthogonal_rows_ = false;

 private:
  mutable std::atomic<long> count_{0};
};

// m selected rows of the n-point orthonormal DCT-II; AA^T = I.
class PartialDctOperator : public LinearOperator {
 public:
  PartialDctOperator(int n, std::vector<int> row_indices);
  const std::vector<int>& row_indices() const { return rows_; }

 protected:
  Vector forward(const Vector& x) const override;
  Vector adjoint(const Vector& y) const override;

 private:
  std::vector<int> rows_;
};

// Dense operator. sigma_max via power iteration on A^T A; sigma_min exactly
// (SVD) on small matrices, otherwise from the supplied hint (< 0 means
// "use the Gaussian asymptotic estimate").
class DenseOperator : public LinearOperator {
 public:
  explicit DenseOperator(Matrix a, double sigma_min_hint = -1.0);
  const Matrix& matrix() const { return a_; }

 protected:
  Vector forward(const Vector& x) const override;
  Vector adjoint(const Vector& y) const override;

 private:
  Matrix a_;
};

// factor * A, sharing the base operator. Used by the rescaled (A,b)/sigma_max
// construction of the theoretical schedule.
class ScaledOperator : public LinearOperator {
 public:
  ScaledOperator(std::shared_ptr<const LinearOperator> base, double factor);

 protected:
  Vector forward(const Vector& x) const override;
  Vector adjoint(const Vector& y) const override;

 private:
  std::shared_ptr<const LinearOperator> base_;
  double factor_;
};

// Largest singular value. Returns exactly 1 for orthogonal-row operators;
// otherwise power iteration on A^T A (relative tolerance 1e-8, cap 500
// iterations). Uses uncounted applications.
double estimate_sigma_max(const LinearOperator& op, bool* converged = nullptr);

// Marchenko-Pastur asymptotic estimate (1 - sqrt(m/n)) * sqrt(n) for the
// smallest singular value of an m x n standard Gaussian matrix.
double estimate_sigma_min_gaussian(Eigen::Index m, Eigen::Index n);

}  // namespace fal
