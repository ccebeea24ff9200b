#include "uoco/domains.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "uoco/streams.hpp"

namespace uoco {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dimension(const Vector& point, int dimension, const char* where) {
  if (point.size() != dimension) {
    throw DimensionMismatch(where, point.size(), dimension);
  }
}

// Finishes a Dykstra run on the rows it has identified as active: solve the
// equality-constrained projection onto those rows, drop rows whose multiplier
// turns negative, add the most violated row, repeat. A result is returned only
// with a KKT certificate (nonnegative multipliers, every row satisfied).
std::optional<Vector> polish_active_set(const Vector& z, const Vector& x_now,
                                        const HalfspaceSet& set,
                                        const std::vector<double>& sq_norms,
                                        const std::vector<double>& c, double tol) {
  const std::size_t m = set.rows.size();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < m; ++j) {
    const Halfspace& h = set.rows[j];
    const double an = std::sqrt(sq_norms[j]);
    const double slack = (h.offset - h.normal.dot(x_now)) / an;
    if (c[j] > 0.0 && slack <= 1e-6 * (1.0 + x_now.norm())) active.push_back(j);
  }
  for (std::size_t iter = 0; iter < 2 * m + 2; ++iter) {
    Vector x = z;
    Vector lam;
    Matrix A;
    if (!active.empty()) {
      const Eigen::Index k = static_cast<Eigen::Index>(active.size());
      A.resize(k, z.size());
      Vector b(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        A.row(r) = set.rows[active[r]].normal.transpose();
        b[r] = set.rows[active[r]].offset;
      }
      const Matrix M = A * A.transpose();
      const Vector rhs = A * z - b;
      lam = Eigen::CompleteOrthogonalDecomposition<Matrix>(M).solve(rhs);
      const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
      if ((M * lam - rhs).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;
      Eigen::Index worst = 0;
      if (lam.minCoeff(&worst) < -1e-12 * (1.0 + lam.cwiseAbs().maxCoeff())) {
        active.erase(active.begin() + worst);
        continue;
      }
      x.noalias() -= A.transpose() * lam;
    }
    double violation = tol;
    std::size_t add = m;
    for (std::size_t j = 0; j < m; ++j) {
      const Halfspace& h = set.rows[j];
      const double v = (h.normal.dot(x) - h.offset) / std::sqrt(sq_norms[j]);
      if (v > violation) {
        violation = v;
        add = j;
      }
    }
    if (add == m) return x;
    if (std::find(active.begin(), active.end(), add) != active.end()) return std::nullopt;
    active.push_back(add);
  }
  return std::nullopt;
}

// Cyclic Dykstra over halfspaces. The correction term of row j is always a
// nonnegative multiple c_j of a_j, so x = z - sum_j c_j a_j holds after every
// row step and c doubles as a dual certificate for the stopping rule.
Vector dykstra(const Vector& z, const HalfspaceSet& set,
               const std::vector<double>& sq_norms, double tol,
               int max_sweeps) {
  const std::size_t m = set.rows.size();
  Vector x = z;
  std::vector<double> c(m, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  double residual = std::numeric_limits<double>::infinity();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < m; ++j) {
      const Halfspace& h = set.rows[j];
      const double shifted = (h.normal.dot(x) - h.offset) / sq_norms[j] + c[j];
      const double c_new = std::max(0.0, shifted);
      const double step = c[j] - c_new;
      if (step != 0.0) x.noalias() += step * h.normal;
      c[j] = c_new;
    }

    // Primal violation plus duality gap: 0.5||x - x*||^2 <= gap when x is
    // feasible. Slacks at round-off level are treated as zero.
    double violation = 0.0;
    double gap = 0.0;
    const double xnorm = x.norm();
    for (std::size_t j = 0; j < m; ++j) {
      const Halfspace& h = set.rows[j];
      const double an = std::sqrt(sq_norms[j]);
      const double slack = h.offset - h.normal.dot(x);
      if (slack < 0.0) {
        violation = std::max(violation, -slack / an);
      } else if (c[j] > 0.0) {
        const double floor = 64.0 * eps * (std::abs(h.offset) + an * xnorm);
        if (slack > floor) gap += c[j] * slack;
      }
    }
    residual = std::max(violation, std::sqrt(2.0 * gap));
    if (residual <= tol) return x;
    // Near a vertex the sweeps creep; finish on the identified active set.
    if (sweep % 4 == 3) {
      if (auto exact = polish_active_set(z, x, set, sq_norms, c, tol)) return *exact;
    }
  }
  throw NonConvergence("Dykstra projection did not reach tolerance", residual);
}

}  // namespace

Domain::Domain(DomainVariant set, int dimension, double diameter_bound,
               double radius_bound, double tolerance, int max_sweeps)
    : set_(std::move(set)),
      dimension_(dimension),
      diameter_bound_(diameter_bound),
      radius_bound_(radius_bound),
      tolerance_(tolerance),
      max_sweeps_(max_sweeps) {
  if (dimension_ <= 0) throw ConfigError("domain dimension must be positive");
  if (!(diameter_bound_ > 0.0) || !std::isfinite(diameter_bound_)) {
    throw ConfigError("domain diameter bound must be positive and finite");
  }
  if (tolerance_ < 0.0) throw ConfigError("projection tolerance must be >= 0");
  if (max_sweeps_ <= 0) throw ConfigError("max projection iterations must be > 0");
  if (const auto* hs = std::get_if<HalfspaceSet>(&set_)) {
    row_sq_norms_.reserve(hs->rows.size());
    for (const auto& row : hs->rows) row_sq_norms_.push_back(row.normal.squaredNorm());
  }
}

Domain::Domain(const Domain& other)
    : set_(other.set_),
      dimension_(other.dimension_),
      diameter_bound_(other.diameter_bound_),
      radius_bound_(other.radius_bound_),
      tolerance_(other.tolerance_),
      max_sweeps_(other.max_sweeps_),
      row_sq_norms_(other.row_sq_norms_) {}

Domain& Domain::operator=(const Domain& other) {
  if (this != &other) {
    set_ = other.set_;
    dimension_ = other.dimension_;
    diameter_bound_ = other.diameter_bound_;
    radius_bound_ = other.radius_bound_;
    tolerance_ = other.tolerance_;
    max_sweeps_ = other.max_sweeps_;
    row_sq_norms_ = other.row_sq_norms_;
    calls_.store(0, std::memory_order_relaxed);
  }
  return *this;
}

Domain::Domain(Domain&& other) noexcept
    : set_(std::move(other.set_)),
      dimension_(other.dimension_),
      diameter_bound_(other.diameter_bound_),
      radius_bound_(other.radius_bound_),
      tolerance_(other.tolerance_),
      max_sweeps_(other.max_sweeps_),
      row_sq_norms_(std::move(other.row_sq_norms_)) {}

Domain& Domain::operator=(Domain&& other) noexcept {
  set_ = std::move(other.set_);
  dimension_ = other.dimension_;
  diameter_bound_ = other.diameter_bound_;
  radius_bound_ = other.radius_bound_;
  tolerance_ = other.tolerance_;
  max_sweeps_ = other.max_sweeps_;
  row_sq_norms_ = std::move(other.row_sq_norms_);
  calls_.store(0, std::memory_order_relaxed);
  return *this;
}

Domain Domain::ball(int dimension, double radius) {
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
  return Domain(BallSet{radius}, dimension, 2.0 * radius, radius, 0.0, 1);
}

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw DimensionMismatch("box bounds", upper.size(), lower.size());
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= 0.0 && 0.0 <= upper[i])) {
      throw ConfigError("box must contain the origin (lower <= 0 <= upper)");
    }
  }
  const double diameter = (upper - lower).norm();
  const double radius = lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
  const int d = static_cast<int>(lower.size());
  if (!(diameter > 0.0)) throw ConfigError("box must have positive diameter");
  return Domain(BoxSet{std::move(lower), std::move(upper)}, d, diameter, radius,
                0.0, 1);
}

Domain Domain::cube(int dimension, double half_width) {
  if (!(half_width > 0.0)) throw ConfigError("cube half-width must be positive");
  return box(Vector::Constant(dimension, -half_width),
             Vector::Constant(dimension, half_width));
}

Domain Domain::simplex(int dimension, double scale) {
  if (!(scale > 0.0)) throw ConfigError("simplex scale must be positive");
  const double diameter = dimension >= 2 ? scale * std::sqrt(2.0) : scale;
  return Domain(SimplexSet{scale}, dimension, diameter, scale, 0.0, 1);
}

Domain Domain::halfspaces(std::vector<Halfspace> rows, double diameter_bound,
                          double tolerance, int max_sweeps) {
  if (rows.empty()) throw ConfigError("halfspace intersection needs at least one row");
  const Eigen::Index d = rows.front().normal.size();
  for (const auto& row : rows) {
    if (row.normal.size() != d) throw DimensionMismatch("halfspace row", row.normal.size(), d);
    if (!(row.normal.squaredNorm() > 0.0)) throw ConfigError("halfspace normal must be nonzero");
    if (!(row.offset >= 0.0)) {
      throw ConfigError("halfspace offset must be >= 0 so the origin is feasible");
    }
  }
  return Domain(HalfspaceSet{std::move(rows)}, static_cast<int>(d), diameter_bound,
                diameter_bound, tolerance, max_sweeps);
}

DomainKind Domain::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const BallSet&) { return DomainKind::kBall; },
                        [](const BoxSet&) { return DomainKind::kBox; },
                        [](const SimplexSet&) { return DomainKind::kSimplex; },
                        [](const HalfspaceSet&) { return DomainKind::kHalfspaces; },
                    },
                    set_);
}

std::string Domain::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const BallSet& b) { out << "ball(r=" << b.radius << ")"; },
                 [&](const BoxSet&) { out << "box"; },
                 [&](const SimplexSet& s) { out << "simplex(scale=" << s.scale << ")"; },
                 [&](const HalfspaceSet& h) { out << "halfspaces(m=" << h.rows.size() << ")"; },
             },
             set_);
  out << " d=" << dimension_ << " D=" << diameter_bound_;
  return out.str();
}

Vector Domain::project(const Vector& point) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  return project_uncounted(point);
}

Vector Domain::project_uncounted(const Vector& point) const {
  check_dimension(point, dimension_, "project");
  return std::visit(
      Overloaded{
          [&](const BallSet& b) { return project_to_ball(point, b.radius); },
          [&](const BoxSet& b) -> Vector { return point.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const SimplexSet& s) -> Vector {
            Vector clipped = point.cwiseMax(0.0);
            if (clipped.sum() <= s.scale) return clipped;
            return project_to_simplex_face(point, s.scale);
          },
          [&](const HalfspaceSet& h) {
            return dykstra(point, h, row_sq_norms_, tolerance_, max_sweeps_);
          },
      },
      set_);
}

double Domain::distance_to(const Vector& point) const {
  return (point - project_uncounted(point)).norm();
}

bool Domain::contains(const Vector& point, double tol) const {
  return distance_to(point) <= tol;
}

Vector project(const Vector& point, const Domain& domain) { return domain.project(point); }

double distance_to(const Vector& point, const Domain& domain) {
  return domain.distance_to(point);
}

bool membership(const Vector& point, const Domain& domain, double tol) {
  return domain.contains(point, tol);
}

Vector project_to_ball(const Vector& point, double radius) {
  const double norm = point.norm();
  if (norm <= radius) return point;
  return point * (radius / norm);
}

Vector project_to_simplex_face(const Vector& point, double scale) {
  const Eigen::Index n = point.size();
  std::vector<double> sorted(point.data(), point.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - scale) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  return (point.array() - threshold).cwiseMax(0.0).matrix();
}

Domain random_polytope(int dimension, int rows, double half_width,
                       std::uint64_t seed) {
  if (rows < 2 * dimension) {
    throw ConfigError("random polytope needs at least 2d rows");
  }
  Rng rng(seed);
  std::vector<Halfspace> hs;
  hs.reserve(static_cast<std::size_t>(rows));
  for (int i = 0; i < dimension; ++i) {
    Vector e = Vector::Zero(dimension);
    e[i] = 1.0;
    hs.push_back({e, half_width});
    hs.push_back({-e, half_width});
  }
  for (int k = 2 * dimension; k < rows; ++k) {
    Vector a = rng.normal_vector(dimension).normalized();
    hs.push_back({a, half_width * (0.2 + 0.8 * rng.uniform())});
  }
  return Domain::halfspaces(std::move(hs), 2.0 * half_width * std::sqrt(dimension));
}

}  // namespace uoco
