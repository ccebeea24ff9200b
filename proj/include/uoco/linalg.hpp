#ifndef UOCO_LINALG_HPP_
#define UOCO_LINALG_HPP_

#include "uoco/types.hpp"

namespace uoco {

struct SymmetricEigen {
  Vector values;   // unsorted
  Matrix vectors;  // columns are orthonormal eigenvectors
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// rel_tol times the full Frobenius norm. Intended for small d (<= 64).
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double rel_tol = 1e-12,
                            int max_sweeps = 100);

/// Exact generalized projection onto the centred ball:
///   argmin_{||y|| <= radius} (y - target)^T sigma (y - target)
/// for symmetric positive-definite sigma. Solves ||(sigma + mu I)^{-1} sigma
/// target|| = radius for the multiplier mu >= 0 with safeguarded Newton.
Vector sigma_ball_projection(const Matrix& sigma, const Vector& target, double radius);

/// Same, reusing an eigendecomposition of sigma.
Vector sigma_ball_projection(const SymmetricEigen& eig, const Vector& target,
                             double radius);

}  // namespace uoco

#endif  // UOCO_LINALG_HPP_
