#include "uoco/surrogate.hpp"

#include <algorithm>
#include <cmath>

namespace uoco {

double inside_threshold(double projection_tolerance) {
  return std::max(1e-12, projection_tolerance);
}

SurrogateContext make_context(Vector y, Vector x, Vector grad_f,
                              double projection_tolerance) {
  if (x.size() != y.size()) throw DimensionMismatch("make_context x", x.size(), y.size());
  if (grad_f.size() != y.size()) {
    throw DimensionMismatch("make_context grad_f", grad_f.size(), y.size());
  }
  if (!grad_f.allFinite()) throw OracleError("gradient has non-finite entries");

  SurrogateContext ctx;
  ctx.gap = (y - x).norm();
  if (ctx.gap > inside_threshold(projection_tolerance)) {
    ctx.v = (y - x) / ctx.gap;
    ctx.alignment = grad_f.dot(ctx.v);
    ctx.inward = ctx.alignment < 0.0;
  } else {
    ctx.v = Vector::Zero(y.size());
  }
  ctx.y = std::move(y);
  ctx.x = std::move(x);
  ctx.grad_f = std::move(grad_f);
  return ctx;
}

SurrogateContext build_context(const Vector& y, const Vector& grad_f,
                               const Domain& inner_domain) {
  Vector x = inner_domain.project(y);
  return make_context(y, std::move(x), grad_f, inner_domain.projection_tolerance());
}

double surrogate_value(const SurrogateContext& ctx, const Vector& y,
                       const Domain& inner_domain) {
  const double linear = ctx.grad_f.dot(y);
  if (!ctx.inward) return linear;
  return linear - ctx.alignment * inner_domain.distance_to(y);
}

Vector surrogate_grad(const SurrogateContext& ctx) {
  if (!ctx.inward) return ctx.grad_f;
  return ctx.grad_f - ctx.alignment * ctx.v;
}

double legacy_surrogate_value(const SurrogateContext& ctx, const Vector& y,
                              const Domain& inner_domain) {
  return ctx.grad_f.dot(y) + ctx.grad_f.norm() * inner_domain.distance_to(y);
}

Vector legacy_surrogate_grad(const SurrogateContext& ctx) {
  if (ctx.gap <= 0.0 || ctx.v.squaredNorm() == 0.0) return ctx.grad_f;
  return ctx.grad_f + ctx.grad_f.norm() * ctx.v;
}

}  // namespace uoco
