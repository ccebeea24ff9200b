#include "uoco/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uoco {

namespace {

double learning_rate_for(double log_n, double cum_sq) {
  return std::min(0.5, std::sqrt(log_n / (1.0 + cum_sq)));
}

}  // namespace

MetaState meta_init(std::size_t expert_count) {
  if (expert_count == 0) throw ConfigError("meta-algorithm needs at least one expert");
  const double n = static_cast<double>(expert_count);
  MetaState state;
  state.log_weight.assign(expert_count, -std::log(n));
  // A single expert would give ln N = 0 and a zero learning rate; the weights
  // are then fixed at one.
  const double eta = expert_count == 1 ? 0.5 : learning_rate_for(std::log(n), 0.0);
  state.learning_rate.assign(expert_count, eta);
  state.cum_sq_excess.assign(expert_count, 0.0);
  return state;
}

std::vector<double> meta_weights(const MetaState& state) {
  const std::size_t n = state.expert_count();
  std::vector<double> p(n);
  if (n == 1) {
    p[0] = 1.0;
    return p;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = state.log_weight[i] + std::log(state.learning_rate[i]);
    top = std::max(top, p[i]);
  }
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

double normalize_meta_loss(const Vector& surr_grad, const Vector& y_i, const Vector& y_t,
                           double G, double D) {
  constexpr double slack = 1e-9;
  if (surr_grad.norm() > G + slack) {
    throw RangeViolation("surrogate gradient norm exceeds G");
  }
  if (y_i.norm() > D + slack || y_t.norm() > D + slack) {
    throw RangeViolation("decision norm exceeds D");
  }
  const double loss = surr_grad.dot(y_i - y_t) / (4.0 * G * D) + 0.5;
  return std::clamp(loss, 0.0, 1.0);
}

MetaState meta_update(const MetaState& state, const std::vector<double>& expert_losses,
                      double aggregate_loss) {
  const std::size_t n = state.expert_count();
  if (expert_losses.size() != n) {
    throw DimensionMismatch("meta_update losses", static_cast<Eigen::Index>(expert_losses.size()),
                            static_cast<Eigen::Index>(n));
  }
  constexpr double slack = 1e-9;
  auto in_unit = [](double v) { return v >= -slack && v <= 1.0 + slack; };
  if (!in_unit(aggregate_loss)) throw RangeViolation("aggregate meta-loss outside [0, 1]");
  for (double l : expert_losses) {
    if (!in_unit(l)) throw RangeViolation("expert meta-loss outside [0, 1]");
  }

  MetaState next = state;
  next.round = state.round + 1;
  if (n == 1) return next;

  const double log_n = std::log(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double excess = aggregate_loss - expert_losses[i];
    const double eta_old = state.learning_rate[i];
    double lw = state.log_weight[i] + std::log1p(eta_old * excess);
    next.cum_sq_excess[i] = state.cum_sq_excess[i] + excess * excess;
    const double eta_new = learning_rate_for(log_n, next.cum_sq_excess[i]);
    lw *= eta_new / eta_old;
    next.log_weight[i] = std::max(lw, MetaState::kLogWeightFloor);
    next.learning_rate[i] = eta_new;
  }
  return next;
}

double adapt_ml_prod_gamma(std::size_t expert_count, long horizon) {
  const double n = static_cast<double>(expert_count);
  const double t = static_cast<double>(horizon);
  return 3.0 * std::log(n) +
         std::log(1.0 + n / (2.0 * std::numbers::e) * (1.0 + std::log(t + 1.0)));
}

}  // namespace uoco
