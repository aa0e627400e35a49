#include "fal/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fal {

Vector shrink(const Vector& z, double nu) {
  if (nu < 0.0) throw std::invalid_argument("shrink: negative threshold");
  return z.array().sign() * (z.array().abs() - nu).max(0.0);
}

ShrinkResult constrained_shrink(const Vector& y, double lam, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("constrained_shrink: eta <= 0");
  if (lam < 0.0) throw std::invalid_argument("constrained_shrink: lam < 0");
  if (!y.allFinite())
    throw std::invalid_argument("constrained_shrink: non-finite input");

  ShrinkResult res;
  res.x = shrink(y, lam);
  if (res.x.lpNorm<1>() <= eta) return res;

  // Infeasible: raise the threshold to lam + alpha*. On the sorted magnitudes
  // w_[1] >= w_[2] >= ..., ||shrink(y, lam+alpha)||_1 = P_j - j*alpha for
  // alpha in [w_[j+1], w_[j]], so the pivot index is the largest j with
  // w_[j] > (P_j - eta)/j and alpha* = (P_k - eta)/k.
  std::vector<double> w;
  w.reserve(res.x.size());
  for (Eigen::Index i = 0; i < res.x.size(); ++i)
    if (res.x[i] != 0.0) w.push_back(std::abs(res.x[i]));
  std::sort(w.begin(), w.end(), std::greater<double>());

  double prefix = 0.0;
  double alpha = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    prefix += w[j];
    const double cand = (prefix - eta) / static_cast<double>(j + 1);
    if (w[j] > cand) alpha = cand;
  }

  res.x = shrink(y, lam + alpha);
  res.alpha_star = alpha;
  res.active = true;
  return res;
}

Vector project_ball(const Vector& s, double delta, BallNorm gamma) {
  if (delta < 0.0) throw std::invalid_argument("project_ball: delta < 0");
  switch (gamma) {
    case BallNorm::L2: {
      const double nrm = s.norm();
      if (nrm <= delta) return s;
      if (nrm == 0.0) return s;
      return s * (delta / nrm);
    }
    case BallNorm::Linf:
      return s.array().min(delta).max(-delta);
    case BallNorm::L1: {
      if (s.lpNorm<1>() <= delta) return s;
      if (delta == 0.0) return Vector::Zero(s.size());
      return constrained_shrink(s, 0.0, delta).x;
    }
  }
  throw std::invalid_argument("project_ball: unsupported norm");
}

SubgradientInfo min_norm_subgradient(const Vector& x, const Vector& grad_f,
                                     double lam) {
  if (x.size() != grad_f.size())
    throw std::invalid_argument("min_norm_subgradient: dimension mismatch");
  if (lam < 0.0) throw std::invalid_argument("min_norm_subgradient: lam < 0");

  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double g;
    if (x[i] > 0.0) {
      g = lam + grad_f[i];
    } else if (x[i] < 0.0) {
      g = -lam + grad_f[i];
    } else {
      g = std::max(std::abs(grad_f[i]) - lam, 0.0);
    }
    acc += g * g;
  }
  return {acc, std::sqrt(acc)};
}

}  // namespace fal
