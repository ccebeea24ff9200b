#include "uoco/streams.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

namespace uoco {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kLinearAdversarial: return "LinearAdversarial";
    case FamilyKind::kStronglyConvexQuadratic: return "StronglyConvexQuadratic";
    case FamilyKind::kExpConcaveSquared: return "ExpConcaveSquared";
    case FamilyKind::kSmoothRealizable: return "SmoothRealizable";
  }
  return "unknown";
}

FamilyKind parse_family(const std::string& name) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "linearadversarial" || key == "linear") return FamilyKind::kLinearAdversarial;
  if (key == "stronglyconvexquadratic" || key == "sc" || key == "quadratic")
    return FamilyKind::kStronglyConvexQuadratic;
  if (key == "expconcavesquared" || key == "exp" || key == "squared")
    return FamilyKind::kExpConcaveSquared;
  if (key == "smoothrealizable" || key == "smooth") return FamilyKind::kSmoothRealizable;
  throw ConfigError("unknown family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Rng

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double Rng::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

Vector Rng::normal_vector(int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = normal();
  return v;
}

Vector Rng::in_ball(int d, double radius) {
  Vector v = normal_vector(d);
  double n = v.norm();
  while (n == 0.0) {
    v = normal_vector(d);
    n = v.norm();
  }
  return v * (radius * std::pow(uniform(), 1.0 / d) / n);
}

// ---------------------------------------------------------------------------
// Loss terms

double LossTerm::value(const Vector& x) const {
  const double r = a.dot(x) - b;
  return linear.dot(x) + offset + weight * r * r + 0.5 * curvature * (x - center).squaredNorm();
}

Vector LossTerm::gradient(const Vector& x) const {
  return linear + (2.0 * weight * (a.dot(x) - b)) * a + curvature * (x - center);
}

double LossStream::cumulative_value(const Vector& x, long rounds) const {
  long double total = 0.0L;
  for (long t = 0; t < rounds; ++t) total += terms[t].value(x);
  return static_cast<double>(total);
}

namespace {

LossTerm blank_term(int d) {
  LossTerm term;
  term.linear = Vector::Zero(d);
  term.a = Vector::Zero(d);
  term.center = Vector::Zero(d);
  return term;
}

Vector feasible_sample(Rng& rng, const Domain& domain) {
  return domain.project_uncounted(rng.in_ball(domain.dimension(), domain.radius_bound()));
}

void check_family(const ProblemFamily& family, const Domain& domain) {
  if (family.dimension != domain.dimension()) {
    throw InfeasibleFamily("family dimension " + std::to_string(family.dimension) +
                           " does not match the domain dimension " +
                           std::to_string(domain.dimension()));
  }
  if (family.horizon < 1) throw InfeasibleFamily("horizon must be positive");
  if (!domain.contains(Vector::Zero(domain.dimension()), domain.projection_tolerance())) {
    throw InfeasibleFamily("domain must contain the origin");
  }
  switch (family.kind) {
    case FamilyKind::kLinearAdversarial:
      if (!(family.scale > 0.0) || !std::isfinite(family.scale))
        throw InfeasibleFamily("linear family needs a positive gradient scale");
      break;
    case FamilyKind::kStronglyConvexQuadratic:
      if (!(family.lambda > 0.0) || !std::isfinite(family.lambda))
        throw InfeasibleFamily("strongly convex family needs lambda > 0");
      break;
    case FamilyKind::kExpConcaveSquared:
      break;
    case FamilyKind::kSmoothRealizable:
      if (!(family.lambda >= 0.0) || !std::isfinite(family.lambda))
        throw InfeasibleFamily("smooth family needs lambda >= 0");
      if (family.drift) throw InfeasibleFamily("a realizable stream needs a fixed target");
      break;
  }
}

}  // namespace

LossStream generate_stream(const ProblemFamily& family, const Domain& domain) {
  check_family(family, domain);
  const int d = family.dimension;
  const double R = domain.radius_bound();
  Rng rng(family.seed);

  LossStream stream;
  stream.family = family;
  stream.terms.reserve(family.horizon);
  const Vector target = feasible_sample(rng, domain);

  switch (family.kind) {
    case FamilyKind::kLinearAdversarial: {
      Vector base = rng.normal_vector(d);
      base.normalize();
      for (long t = 0; t < family.horizon; ++t) {
        Vector u = base + 0.05 * rng.normal_vector(d);
        u.normalize();
        LossTerm term = blank_term(d);
        term.linear = (family.scale * rng.sign()) * u;
        term.offset = family.scale * R;
        stream.terms.push_back(std::move(term));
      }
      stream.cert.G = family.scale;
      stream.cert.nonnegative = true;
      break;
    }
    case FamilyKind::kStronglyConvexQuadratic: {
      double max_center = 0.0;
      for (long t = 0; t < family.horizon; ++t) {
        LossTerm term = blank_term(d);
        term.curvature = family.lambda;
        term.center = family.drift
                          ? domain.project_uncounted(target + rng.in_ball(d, 0.5 * R))
                          : target;
        max_center = std::max(max_center, term.center.norm());
        stream.terms.push_back(std::move(term));
      }
      stream.cert.G = family.lambda * (R + max_center);
      stream.cert.lambda = family.lambda;
      stream.cert.H = family.lambda;
      stream.cert.alpha = family.lambda / (stream.cert.G * stream.cert.G);
      stream.cert.nonnegative = true;
      if (!family.drift) stream.realizable_point = target;
      break;
    }
    case FamilyKind::kExpConcaveSquared: {
      for (long t = 0; t < family.horizon; ++t) {
        LossTerm term = blank_term(d);
        const Vector center =
            family.drift ? domain.project_uncounted(target + rng.in_ball(d, 0.5 * R)) : target;
        term.a = rng.in_ball(d, 1.0);
        term.b = std::clamp(term.a.dot(center) + 0.25 * R * rng.normal(), -R, R);
        term.weight = 1.0;
        stream.terms.push_back(std::move(term));
      }
      // |<a, x> - b| <= 2R on the domain.
      stream.cert.G = 4.0 * R;
      stream.cert.alpha = 1.0 / (8.0 * R * R);
      stream.cert.H = 2.0;
      stream.cert.nonnegative = true;
      break;
    }
    case FamilyKind::kSmoothRealizable: {
      for (long t = 0; t < family.horizon; ++t) {
        LossTerm term = blank_term(d);
        term.a = rng.in_ball(d, 1.0);
        term.b = term.a.dot(target);
        term.weight = 1.0;
        term.curvature = family.lambda;
        term.center = target;
        stream.terms.push_back(std::move(term));
      }
      stream.cert.G = 2.0 * R * (2.0 + family.lambda);
      stream.cert.H = 2.0 + family.lambda;
      stream.cert.lambda = family.lambda;
      stream.cert.alpha = family.lambda > 0.0
                              ? family.lambda / (stream.cert.G * stream.cert.G)
                              : 1.0 / (8.0 * R * R);
      stream.cert.nonnegative = true;
      stream.realizable_point = target;
      break;
    }
  }
  return stream;
}

// ---------------------------------------------------------------------------
// Comparator

namespace {

struct Quadratic {
  Matrix Q;  // mean Hessian
  Vector q;  // mean gradient at the origin
  Vector grad(const Vector& x) const { return Q * x + q; }
  double value(const Vector& x) const { return 0.5 * x.dot(Q * x) + q.dot(x); }
};

Quadratic aggregate(const LossStream& stream, long rounds, int d) {
  Quadratic f{Matrix::Zero(d, d), Vector::Zero(d)};
  for (long t = 0; t < rounds; ++t) {
    const LossTerm& term = stream.terms[t];
    if (term.weight != 0.0) {
      f.Q.noalias() += (2.0 * term.weight) * term.a * term.a.transpose();
      f.q.noalias() -= (2.0 * term.weight * term.b) * term.a;
    }
    if (term.curvature != 0.0) {
      f.Q.diagonal().array() += term.curvature;
      f.q.noalias() -= term.curvature * term.center;
    }
    f.q += term.linear;
  }
  const double inv = 1.0 / static_cast<double>(rounds);
  f.Q *= inv;
  f.q *= inv;
  return f;
}

// Minimiser of a linear function over the domain, where it is explicit.
std::optional<Vector> linear_minimizer(const Vector& q, const Domain& domain) {
  const int d = domain.dimension();
  if (const auto* ball = std::get_if<BallSet>(&domain.variant())) {
    const double n = q.norm();
    if (n == 0.0) return Vector::Zero(d);
    return Vector(-ball->radius / n * q);
  }
  if (const auto* box = std::get_if<BoxSet>(&domain.variant())) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = q[i] > 0 ? box->lower[i] : (q[i] < 0 ? box->upper[i] : 0.0);
    return x;
  }
  if (const auto* simplex = std::get_if<SimplexSet>(&domain.variant())) {
    Vector x = Vector::Zero(d);
    Eigen::Index i = 0;
    const double lowest = q.minCoeff(&i);
    if (lowest < 0.0) x[i] = simplex->scale;
    return x;
  }
  return std::nullopt;
}

struct PgdResult {
  Vector x;
  double objective = 0.0;
  double gradient_mapping = std::numeric_limits<double>::infinity();
  long iterations = 0;
};

// Accelerated projected gradient with function-value restarts.
PgdResult run_pgd(const Quadratic& f, const Domain& domain, Vector start, double step,
                  const ComparatorOptions& options) {
  auto mapping = [&](const Vector& x) {
    return (x - domain.project_uncounted(x - step * f.grad(x))).norm() / step;
  };
  Vector x = domain.project_uncounted(start);
  Vector y = x;
  double fx = f.value(x);
  double momentum = 1.0;
  PgdResult out;
  long it = 0;
  for (; it < options.max_iterations; ++it) {
    const Vector next = domain.project_uncounted(y - step * f.grad(y));
    const double step_norm = (next - y).norm() / step;
    const double fnext = f.value(next);
    if (fnext > fx && momentum > 1.0) {
      // Restart from the last accepted point without momentum.
      y = x;
      momentum = 1.0;
      continue;
    }
    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / m_next) * (next - x);
    momentum = m_next;
    x = next;
    fx = fnext;
    if (step_norm <= options.tolerance) {
      const double gm = mapping(x);
      if (gm <= options.tolerance) {
        out.gradient_mapping = gm;
        ++it;
        break;
      }
    }
  }
  out.x = x;
  out.objective = fx;
  out.iterations = it;
  if (!std::isfinite(out.gradient_mapping)) out.gradient_mapping = mapping(x);
  return out;
}

}  // namespace

ComparatorResult comparator_loss(const LossStream& stream, const Domain& domain, long rounds,
                                 const ComparatorOptions& options) {
  if (rounds < 1 || rounds > stream.horizon()) throw Error("comparator: invalid round count");
  const int d = domain.dimension();
  const Quadratic f = aggregate(stream, rounds, d);

  const double top = Eigen::SelfAdjointEigenSolver<Matrix>(f.Q, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .maxCoeff();
  const double R = std::max(domain.radius_bound(), 1e-12);
  // A near-linear objective gets a step that crosses the domain.
  const double curvature = std::max({top, 0.5 * f.q.norm() / R, 1e-12});
  const double step = 1.0 / curvature;

  ComparatorResult result;
  Rng rng(options.seed ^ static_cast<std::uint64_t>(rounds));
  bool have = false;
  for (int s = 0; s < std::max(1, options.starts); ++s) {
    Vector start = s == 0 ? Vector::Zero(d) : feasible_sample(rng, domain);
    PgdResult r = run_pgd(f, domain, std::move(start), step, options);
    if (!have || r.objective < f.value(result.x)) {
      result.x = r.x;
      result.gradient_mapping = r.gradient_mapping;
      result.converged = r.gradient_mapping <= options.tolerance;
      have = true;
    }
    result.iterations += r.iterations;
  }
  result.value = stream.cumulative_value(result.x, rounds);

  // Closed-form candidates.
  std::vector<Vector> candidates;
  const double mean_diag = f.Q.diagonal().mean();
  const double off = (f.Q - mean_diag * Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (mean_diag > 0.0 && off <= 1e-12 * mean_diag) {
    candidates.push_back(domain.project_uncounted(-f.q / mean_diag));
  } else if (f.Q.cwiseAbs().maxCoeff() == 0.0) {
    if (auto x = linear_minimizer(f.q, domain)) candidates.push_back(*x);
  }
  if (stream.realizable_point) candidates.push_back(*stream.realizable_point);
  for (const Vector& c : candidates) {
    const double v = stream.cumulative_value(c, rounds);
    if (!result.closed_form_value || v < *result.closed_form_value) result.closed_form_value = v;
    if (v < result.value) {
      result.x = c;
      result.value = v;
      result.converged = true;
    }
  }
  return result;
}

}  // namespace uoco
