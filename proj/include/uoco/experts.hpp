#ifndef UOCO_EXPERTS_HPP_
#define UOCO_EXPERTS_HPP_

// Expert algorithms running on the outer ball {||y|| <= D}, fed with the
// surrogate gradient of the current round.
//
//   kCvx       OGD, step 1/sqrt(t), linear loss <g, y - y_t>
//   kSc        OGD, step 1/(lambda t), loss + lambda/2 ||y - x_t||^2
//   kExp       ONS, loss + beta/2 <g, y - y_t>^2, beta = min(1/(4GD), alpha)/2
//   kCvxSmooth scale-free OGD, step D/sqrt(2) / sqrt(G^2 + sum ||g||^2)
//   kScSmooth  S2OGD, loss + lambda/(2G^2) ||g||^2 ||y - x_t||^2 with inverse
//              step (1 + 2D/G)^2 + lambda/G^2 sum ||g||^2
//
// No expert projects onto the inner domain unless a feasible set is passed
// explicitly (the multi-projection baseline does that).

#include <string>

#include "uoco/domains.hpp"
#include "uoco/surrogate.hpp"
#include "uoco/types.hpp"

namespace uoco {

enum class ExpertKind { kCvx, kCvxSmooth, kExp, kSc, kScSmooth };

enum class OnsProjection { kExact, kClosedForm };

std::string to_string(ExpertKind kind);

struct ExpertConfig {
  ExpertKind kind = ExpertKind::kCvx;
  /// alpha_hat for kExp, lambda_hat for kSc/kScSmooth; ignored otherwise.
  double modulus = 1.0;
  double G = 1.0;
  double D = 1.0;
  long horizon = 2;
  OnsProjection ons_projection = OnsProjection::kExact;

  double beta_hat() const;
  /// Throws ConfigError on non-positive G/D/horizon or a modulus outside [1/T, 1].
  void validate() const;
};

struct ExpertState {
  Vector y;                    // current iterate, ||y|| <= D
  long t = 1;                  // index of the round the iterate is used in
  Matrix sigma;                // ONS only
  double cumulative_sq = 0.0;  // smooth kinds: sum of ||surrogate grad||^2
};

ExpertState expert_init(const ExpertConfig& config, int dimension);

inline const Vector& expert_predict(const ExpertState& state) { return state.y; }

/// One update with the surrogate gradient of round state.t. When feasible is
/// non-null the final step projects onto it (baseline mode).
ExpertState expert_update(const ExpertState& state, const ExpertConfig& config,
                          const SurrogateContext& ctx, const Vector& surr_grad,
                          const Domain* feasible = nullptr);

/// Expert loss of the given kind evaluated at y. Test and audit use only.
double expert_loss_value(const ExpertConfig& config, const SurrogateContext& ctx,
                         const Vector& surr_grad, const Vector& y);

/// Gradient of expert_loss_value in y.
Vector expert_loss_grad(const ExpertConfig& config, const SurrogateContext& ctx,
                        const Vector& surr_grad, const Vector& y);

/// Algorithm-5 style ball step using the fixed spectral shift
/// Q (4 beta D^2 I + Lambda)^{-1} Q^T sigma target, with (Q, Lambda) the
/// eigenpairs of sigma - I/(beta D)^2. Does not land on the sphere in general.
Vector ons_closed_form_projection(const Matrix& sigma, const Vector& target, double beta,
                            double radius);

}  // namespace uoco

#endif  // UOCO_EXPERTS_HPP_
