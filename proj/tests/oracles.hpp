#ifndef UOCO_TESTS_ORACLES_HPP_
#define UOCO_TESTS_ORACLES_HPP_

// Reference computations for the tests. Each one is written independently of
// the library code it checks: different algorithm, extended precision, or
// brute force.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "uoco/domains.hpp"
#include "uoco/streams.hpp"

namespace oracle {

using uoco::Matrix;
using uoco::Vector;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Projection onto {x : a_j.x <= b_j} by enumerating every subset of rows of
/// size <= d, projecting onto the corresponding affine set and keeping the
/// nearest feasible candidate. Exponential; meant for m <= 12.
inline Vector halfspace_projection(const Vector& z, const std::vector<uoco::Halfspace>& rows) {
  const int m = static_cast<int>(rows.size());
  const int d = static_cast<int>(z.size());
  auto feasible = [&](const Vector& x) {
    for (const auto& h : rows)
      if (h.normal.dot(x) - h.offset > 1e-11 * (1.0 + std::abs(h.offset))) return false;
    return true;
  };
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int k = __builtin_popcount(mask);
    if (k > d) continue;
    Vector x = z;
    if (k > 0) {
      LMatrix A(k, d);
      LVector b(k);
      int r = 0;
      for (int j = 0; j < m; ++j) {
        if (!(mask & (1u << j))) continue;
        A.row(r) = rows[j].normal.cast<long double>().transpose();
        b[r] = rows[j].offset;
        ++r;
      }
      const LMatrix M = A * A.transpose();
      Eigen::FullPivLU<LMatrix> lu(M);
      if (lu.rank() < k) continue;
      const LVector lam = lu.solve(A * z.cast<long double>() - b);
      x = (z.cast<long double>() - A.transpose() * lam).cast<double>();
    }
    if (!feasible(x)) continue;
    const double dist = (x - z).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

/// Projection onto {x >= 0, sum x <= s} by bisection on the threshold.
inline Vector solid_simplex_projection(const Vector& z, double s) {
  Vector clipped = z.cwiseMax(0.0);
  if (clipped.sum() <= s) return clipped;
  long double lo = 0.0L, hi = static_cast<long double>(z.maxCoeff());
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      total += std::max<long double>(0.0L, static_cast<long double>(z[i]) - mid);
    (total > s ? lo : hi) = mid;
  }
  const long double theta = 0.5L * (lo + hi);
  Vector x(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    x[i] = static_cast<double>(std::max<long double>(0.0L, static_cast<long double>(z[i]) - theta));
  return x;
}

/// argmin_{||y|| <= r} (y - target)^T sigma (y - target), via the multiplier
/// mu >= 0 with ||(sigma + mu I)^{-1} sigma target|| = r. Long double
/// eigensolver from Eigen and plain bisection on mu.
inline Vector sigma_ball_projection(const Matrix& sigma, const Vector& target, double r) {
  if (target.norm() <= r) return target;
  Eigen::SelfAdjointEigenSolver<LMatrix> es(sigma.cast<long double>());
  const LVector lam = es.eigenvalues();
  const LVector c = es.eigenvectors().transpose() * target.cast<long double>();
  auto point = [&](long double mu) {
    LVector w(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) w[i] = lam[i] / (lam[i] + mu) * c[i];
    return LVector(es.eigenvectors() * w);
  };
  long double lo = 0.0L, hi = 1.0L;
  while (point(hi).norm() > r) hi *= 2.0L;
  for (int it = 0; it < 300; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (point(mid).norm() > r ? lo : hi) = mid;
  }
  return point(hi).cast<double>();
}

/// Adapt-ML-Prod kept in plain (not log) weights and long double.
struct AdaptMlProd {
  std::vector<long double> w, eta, cum;
  explicit AdaptMlProd(std::size_t n) : w(n, 1.0L / n), eta(n), cum(n, 0.0L) {
    for (auto& e : eta) e = std::min(0.5L, std::sqrt(std::log(static_cast<long double>(n))));
  }
  std::vector<long double> weights() const {
    long double total = 0.0L;
    for (std::size_t i = 0; i < w.size(); ++i) total += eta[i] * w[i];
    std::vector<long double> p(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = eta[i] * w[i] / total;
    return p;
  }
  void update(const std::vector<double>& losses, double aggregate) {
    const long double log_n = std::log(static_cast<long double>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const long double r = static_cast<long double>(aggregate) - losses[i];
      const long double grown = w[i] * (1.0L + eta[i] * r);
      cum[i] += r * r;
      const long double eta_new = std::min(0.5L, std::sqrt(log_n / (1.0L + cum[i])));
      w[i] = std::pow(grown, eta_new / eta[i]);
      eta[i] = eta_new;
    }
  }
};

/// Grid by direct enumeration: 2^k / T for k = 0..ceil(log2 T), values above 1
/// replaced by 1, duplicates dropped.
inline std::vector<double> grid(long T) {
  int n = 0;
  while (std::pow(2.0, n) < static_cast<double>(T)) ++n;
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) {
    double v = std::pow(2.0, k) / static_cast<double>(T);
    if (v > 1.0) v = 1.0;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Distance to a domain computed with the oracles above where the projection
/// is nontrivial.
inline Vector project(const uoco::Domain& domain, const Vector& z) {
  const auto& v = domain.variant();
  if (const auto* b = std::get_if<uoco::BallSet>(&v)) {
    const double n = z.norm();
    return n <= b->radius ? z : Vector(z * (b->radius / n));
  }
  if (const auto* b = std::get_if<uoco::BoxSet>(&v)) {
    Vector x(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      x[i] = z[i] < b->lower[i] ? b->lower[i] : (z[i] > b->upper[i] ? b->upper[i] : z[i]);
    return x;
  }
  if (const auto* s = std::get_if<uoco::SimplexSet>(&v)) return solid_simplex_projection(z, s->scale);
  return halfspace_projection(z, std::get<uoco::HalfspaceSet>(v).rows);
}

/// Central finite-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector up = x, down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

/// Random halfspace domain containing the origin: m unit-normal rows with
/// offsets in [0.2, 1], plus the cube rows so the set stays bounded.
inline uoco::Domain small_polytope(int d, int extra_rows, uoco::Rng& rng) {
  std::vector<uoco::Halfspace> rows;
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1.0;
    rows.push_back({e, 1.0});
    rows.push_back({-e, 1.0});
  }
  for (int j = 0; j < extra_rows; ++j) {
    Vector a = rng.normal_vector(d).normalized();
    rows.push_back({a, 0.2 + 0.8 * rng.uniform()});
  }
  return uoco::Domain::halfspaces(rows, 2.0 * std::sqrt(static_cast<double>(d)));
}

}  // namespace oracle

#endif  // UOCO_TESTS_ORACLES_HPP_
