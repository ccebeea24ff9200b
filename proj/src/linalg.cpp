#include "uoco/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace uoco {

SymmetricEigen jacobi_eigen(const Matrix& symmetric, double rel_tol, int max_sweeps) {
  const Eigen::Index n = symmetric.rows();
  if (symmetric.cols() != n) throw DimensionMismatch("jacobi_eigen", symmetric.cols(), n);
  Matrix a = 0.5 * (symmetric + symmetric.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double fro = a.norm();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= rel_tol * fro) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

Vector sigma_ball_projection(const SymmetricEigen& eig, const Vector& target,
                             double radius) {
  if (target.norm() <= radius) return target;
  const Vector coeff = eig.vectors.transpose() * target;
  const Vector weighted = eig.values.cwiseProduct(coeff);

  // n(mu) = ||y(mu)|| is strictly decreasing; at mu = lambda_max ||target|| / r
  // every component is bounded so that n <= r.
  double lo = 0.0;
  double hi = eig.values.maxCoeff() * target.norm() / radius;
  double mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Eigen::ArrayXd denom = eig.values.array() + mu;
    const double n = (weighted.array() / denom).matrix().norm();
    if (std::abs(n - radius) <= 1e-15 * radius) break;
    if (n > radius) lo = mu; else hi = mu;
    // Newton on psi(mu) = 1/n(mu) - 1/r, which is nearly linear in mu.
    const double dpsi = (weighted.array().square() / denom.cube()).sum() / (n * n * n);
    double next = mu - (1.0 / n - 1.0 / radius) / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == mu || hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    mu = next;
  }
  Vector y = eig.vectors * (weighted.array() / (eig.values.array() + mu)).matrix();
  const double ny = y.norm();
  if (ny > radius) y *= radius / ny;
  return y;
}

Vector sigma_ball_projection(const Matrix& sigma, const Vector& target, double radius) {
  if (target.norm() <= radius) return target;
  return sigma_ball_projection(jacobi_eigen(sigma), target, radius);
}

}  // namespace uoco
