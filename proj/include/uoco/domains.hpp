#ifndef UOCO_DOMAINS_HPP_
#define UOCO_DOMAINS_HPP_

// Convex feasible sets with Euclidean projection oracles.
//
// Every domain contains the origin. Projections are pure functions of their
// inputs; the only mutable member is an atomic call counter used to audit how
// many projections an algorithm performs.

#include <atomic>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "uoco/types.hpp"

namespace uoco {

struct BallSet {
  double radius = 1.0;
};

struct BoxSet {
  Vector lower;
  Vector upper;
};

/// Solid simplex {x >= 0, sum(x) <= scale}; contains the origin.
struct SimplexSet {
  double scale = 1.0;
};

/// Halfspace {x : <normal, x> <= offset}; offset >= 0 keeps the origin inside.
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

struct HalfspaceSet {
  std::vector<Halfspace> rows;
};

using DomainVariant = std::variant<BallSet, BoxSet, SimplexSet, HalfspaceSet>;

enum class DomainKind { kBall, kBox, kSimplex, kHalfspaces };

class Domain {
 public:
  static constexpr double kDefaultTolerance = 1e-8;
  static constexpr int kDefaultMaxSweeps = 100000;

  static Domain ball(int dimension, double radius);
  static Domain box(Vector lower, Vector upper);
  /// Box [-half_width, half_width]^d.
  static Domain cube(int dimension, double half_width);
  static Domain simplex(int dimension, double scale);
  /// The diameter bound is caller-supplied; it must not underestimate.
  static Domain halfspaces(std::vector<Halfspace> rows, double diameter_bound,
                           double tolerance = kDefaultTolerance,
                           int max_sweeps = kDefaultMaxSweeps);

  Domain(const Domain& other);
  Domain& operator=(const Domain& other);
  Domain(Domain&& other) noexcept;
  Domain& operator=(Domain&& other) noexcept;
  ~Domain() = default;

  /// Euclidean projection. Exact for ball/box/simplex, Dykstra for halfspaces.
  /// Throws DimensionMismatch or NonConvergence.
  Vector project(const Vector& point) const;
  /// ||point - project(point)||.
  double distance_to(const Vector& point) const;
  bool contains(const Vector& point, double tol) const;

  DomainKind kind() const noexcept;
  const DomainVariant& variant() const noexcept { return set_; }
  int dimension() const noexcept { return dimension_; }
  double diameter_bound() const noexcept { return diameter_bound_; }
  /// Upper bound on sup ||x|| over the set. Never larger than the diameter
  /// bound because the set contains the origin.
  double radius_bound() const noexcept { return radius_bound_; }
  double projection_tolerance() const noexcept { return tolerance_; }
  int max_projection_iterations() const noexcept { return max_sweeps_; }
  std::string describe() const;

  /// Number of project() calls on this object since construction or reset.
  /// Copies start from zero.
  std::uint64_t projection_calls() const noexcept {
    return calls_.load(std::memory_order_relaxed);
  }
  void reset_projection_calls() const noexcept {
    calls_.store(0, std::memory_order_relaxed);
  }

  /// Same computation as project() without touching the counter. Used by
  /// distance evaluations that are not part of an algorithm's projection budget.
  Vector project_uncounted(const Vector& point) const;

 private:
  Domain(DomainVariant set, int dimension, double diameter_bound,
         double radius_bound, double tolerance, int max_sweeps);

  DomainVariant set_;
  int dimension_ = 0;
  double diameter_bound_ = 0.0;
  double radius_bound_ = 0.0;
  double tolerance_ = 0.0;
  int max_sweeps_ = 1;
  std::vector<double> row_sq_norms_;  // cached ||a_j||^2 for halfspaces
  mutable std::atomic<std::uint64_t> calls_{0};
};

Vector project(const Vector& point, const Domain& domain);
double distance_to(const Vector& point, const Domain& domain);
bool membership(const Vector& point, const Domain& domain, double tol);

/// Projection onto the centred ball {||x|| <= radius} by radial rescaling.
Vector project_to_ball(const Vector& point, double radius);

/// Sort-and-threshold projection onto {x >= 0, sum(x) = scale}.
Vector project_to_simplex_face(const Vector& point, double scale);

/// Random polytope in R^d: 2d axis rows |x_i| <= half_width plus
/// (rows - 2d) random halfspaces with offsets in [0.2, 1] * half_width.
/// Requires rows >= 2d. The diameter bound is 2 * half_width * sqrt(d).
Domain random_polytope(int dimension, int rows, double half_width,
                       std::uint64_t seed);

}  // namespace uoco

#endif  // UOCO_DOMAINS_HPP_
