#ifndef UOCO_META_HPP_
#define UOCO_META_HPP_

// Adapt-ML-Prod over a fixed expert set, with weights stored as logarithms.
//
// Round t uses p_t^i proportional to eta^i w^i. After the losses arrive:
//   ln w^i += ln(1 + eta_old^i (l_t - l_t^i))
//   cum^i  += (l_t - l_t^i)^2,  eta_new^i = min(1/2, sqrt(ln N / (1 + cum^i)))
//   ln w^i *= eta_new^i / eta_old^i

#include <cstddef>
#include <vector>

#include "uoco/types.hpp"

namespace uoco {

struct MetaState {
  static constexpr double kLogWeightFloor = -700.0;

  std::vector<double> log_weight;
  std::vector<double> learning_rate;
  std::vector<double> cum_sq_excess;
  long round = 1;

  std::size_t expert_count() const noexcept { return log_weight.size(); }
};

MetaState meta_init(std::size_t expert_count);

/// Probability vector p_t over experts. Sums to one.
std::vector<double> meta_weights(const MetaState& state);

/// Maps <surr_grad, y_i - y_t> from [-2GD, 2GD] onto [0, 1]. Throws
/// RangeViolation when ||surr_grad|| > G or ||y_i||, ||y_t|| > D by more than 1e-9.
double normalize_meta_loss(const Vector& surr_grad, const Vector& y_i,
                           const Vector& y_t, double G, double D);

/// Applies one round of losses. expert_losses and aggregate_loss must lie in [0, 1].
MetaState meta_update(const MetaState& state, const std::vector<double>& expert_losses,
                      double aggregate_loss);

/// Second-order regret constant 3 ln N + ln(1 + N/(2e) (1 + ln(T + 1))).
double adapt_ml_prod_gamma(std::size_t expert_count, long horizon);

}  // namespace uoco

#endif  // UOCO_META_HPP_
