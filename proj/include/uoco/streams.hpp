#ifndef UOCO_STREAMS_HPP_
#define UOCO_STREAMS_HPP_

// Synthetic loss streams and the offline comparator.
//
// Every family is a sum of terms of the form
//
//   f(x) = <l, x> + offset + w (<a, x> - b)^2 + (lambda/2) ||x - c||^2
//
// so the summed loss is an explicit quadratic and the comparator can be
// solved to high accuracy.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uoco/domains.hpp"
#include "uoco/types.hpp"

namespace uoco {

enum class FamilyKind {
  kLinearAdversarial,
  kStronglyConvexQuadratic,
  kExpConcaveSquared,
  kSmoothRealizable,
};

std::string to_string(FamilyKind kind);
/// Accepts the names printed by to_string plus short aliases
/// (linear, sc, exp, smooth). Throws ConfigError otherwise.
FamilyKind parse_family(const std::string& name);

struct ProblemFamily {
  FamilyKind kind = FamilyKind::kStronglyConvexQuadratic;
  /// Strong convexity for kStronglyConvexQuadratic; extra quadratic pull
  /// towards z* for kSmoothRealizable (0 means the plain convex variant).
  double lambda = 1.0;
  /// Per-round targets instead of a fixed z*.
  bool drift = false;
  int dimension = 2;
  long horizon = 16;
  std::uint64_t seed = 0;
  /// Gradient scale of the linear family.
  double scale = 1.0;
};

struct LossTerm {
  Vector linear;           // l
  double offset = 0.0;     // keeps linear losses nonnegative on the domain
  Vector a;
  double b = 0.0;
  double weight = 0.0;     // w
  Vector center;           // c
  double curvature = 0.0;  // lambda

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// Class certificates. Zero means "not certified" for lambda, alpha and H.
struct Certificates {
  double G = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double H = 0.0;
  bool nonnegative = false;
};

struct LossStream {
  ProblemFamily family;
  std::vector<LossTerm> terms;
  Certificates cert;
  /// Known minimiser of the summed loss, when the family has one.
  std::optional<Vector> realizable_point;

  long horizon() const noexcept { return static_cast<long>(terms.size()); }
  /// Sum of f_t(x) over rounds [0, rounds).
  double cumulative_value(const Vector& x, long rounds) const;
  double cumulative_value(const Vector& x) const { return cumulative_value(x, horizon()); }
};

/// Deterministic in (family, domain). Throws InfeasibleFamily when the
/// parameters break a standing assumption (non-positive curvature, domain
/// without the origin, dimension mismatch).
LossStream generate_stream(const ProblemFamily& family, const Domain& domain);

struct ComparatorResult {
  Vector x;
  double value = 0.0;
  /// Final gradient-mapping norm of the winning projected-gradient start.
  double gradient_mapping = 0.0;
  bool converged = false;
  /// Value at the closed-form candidate when one applies.
  std::optional<double> closed_form_value;
  long iterations = 0;
};

struct ComparatorOptions {
  int starts = 8;
  double tolerance = 1e-8;
  long max_iterations = 20000;
  std::uint64_t seed = 0x5eed;
};

/// argmin over the domain of the sum of the first `rounds` losses, by
/// accelerated projected gradient from several feasible starts, plus the
/// closed-form minimiser where one exists. Uses uncounted projections.
ComparatorResult comparator_loss(const LossStream& stream, const Domain& domain, long rounds,
                                 const ComparatorOptions& options = {});
inline ComparatorResult comparator_loss(const LossStream& stream, const Domain& domain) {
  return comparator_loss(stream, domain, stream.horizon());
}

// Portable random draws (identical across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();  // [0, 1)
  double normal();
  double sign();
  Vector normal_vector(int d);
  /// Uniform in the ball of the given radius.
  Vector in_ball(int d, double radius);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace uoco

#endif  // UOCO_STREAMS_HPP_
