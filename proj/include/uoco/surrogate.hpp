#ifndef UOCO_SURROGATE_HPP_
#define UOCO_SURROGATE_HPP_

// Domain-converting surrogate loss on the outer ball.
//
//   g_t(y) = <grad_f, y> - 1{<grad_f, v_t> < 0} <grad_f, v_t> dist(y, X)
//
// where v_t is the unit direction from x_t = P_X(y_t) to y_t. Only the
// gradient at y_t is needed on the per-round path, and it uses no projection.

#include "uoco/domains.hpp"
#include "uoco/types.hpp"

namespace uoco {

/// Per-round bundle from which the surrogate gradient and all expert losses
/// are derived.
struct SurrogateContext {
  Vector y;          // aggregated decision in the outer ball
  Vector x;          // P_X(y), the submitted decision
  Vector grad_f;     // gradient of f_t at x
  Vector v;          // unit vector (y - x)/||y - x||, or zero when y is inside X
  double alignment = 0.0;  // <grad_f, v>
  bool inward = false;     // alignment < 0
  double gap = 0.0;        // ||y - x||
};

/// Threshold below which y is treated as lying inside X.
double inside_threshold(double projection_tolerance);

/// Builds the context from an already projected decision (zero projections).
SurrogateContext make_context(Vector y, Vector x, Vector grad_f,
                              double projection_tolerance);

/// Projects y onto the inner domain once and fills the context.
SurrogateContext build_context(const Vector& y, const Vector& grad_f,
                               const Domain& inner_domain);

/// Evaluates g_t(y). Needs one projection, so it stays off the round loop.
double surrogate_value(const SurrogateContext& ctx, const Vector& y,
                       const Domain& inner_domain);

/// Gradient of g_t at y_t: grad_f, or grad_f - alignment * v when inward.
/// Its norm never exceeds ||grad_f||.
Vector surrogate_grad(const SurrogateContext& ctx);

// The earlier surrogate <grad_f, y> + ||grad_f|| dist(y, X). Kept only to
// compare its factor-2 value inequality against g_t in tests.
double legacy_surrogate_value(const SurrogateContext& ctx, const Vector& y,
                              const Domain& inner_domain);
Vector legacy_surrogate_grad(const SurrogateContext& ctx);

}  // namespace uoco

#endif  // UOCO_SURROGATE_HPP_
