#pragma once

// Orthonormal DCT-II and its inverse (= adjoint). Power-of-two lengths use
// the recursive even/odd split (Lee's algorithm), O(n log n); other lengths
// fall back to the O(n^2) definition.

#include <Eigen/Core>

namespace fal {

// y_k = s_k * sum_j x_j cos(pi*(2j+1)*k/(2n)),  s_0 = sqrt(1/n), s_k = sqrt(2/n).
Eigen::VectorXd dct2(const Eigen::VectorXd& x);

// Inverse of dct2; because the transform is orthonormal this is also the
// adjoint.
Eigen::VectorXd idct2(const Eigen::VectorXd& y);

}  // namespace fal
