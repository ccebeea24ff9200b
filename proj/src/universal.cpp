#include "uoco/universal.hpp"

#include <algorithm>
#include <cmath>

namespace uoco {

std::vector<double> modulus_grid(long horizon) {
  if (horizon < 2) throw ConfigError("horizon must be at least 2");
  const double T = static_cast<double>(horizon);
  int levels = 0;
  while ((1L << levels) < horizon) ++levels;  // ceil(log2 T)
  std::vector<double> grid;
  for (int k = 0; k <= levels; ++k) {
    const double value = std::min(1.0, std::ldexp(1.0, k) / T);
    if (grid.empty() || value > grid.back()) grid.push_back(value);
  }
  return grid;
}

std::vector<ExpertConfig> build_expert_grid(long horizon, double G, double D, Mode mode,
                                            OnsProjection ons) {
  const std::vector<double> grid = modulus_grid(horizon);
  const bool smooth = mode == Mode::kSmallLoss;
  std::vector<ExpertConfig> experts;
  experts.reserve(1 + 2 * grid.size());
  ExpertConfig base;
  base.G = G;
  base.D = D;
  base.horizon = horizon;
  base.ons_projection = ons;

  ExpertConfig convex = base;
  convex.kind = smooth ? ExpertKind::kCvxSmooth : ExpertKind::kCvx;
  experts.push_back(convex);
  for (double alpha : grid) {
    ExpertConfig e = base;
    e.kind = ExpertKind::kExp;
    e.modulus = alpha;
    experts.push_back(e);
  }
  for (double lambda : grid) {
    ExpertConfig e = base;
    e.kind = smooth ? ExpertKind::kScSmooth : ExpertKind::kSc;
    e.modulus = lambda;
    experts.push_back(e);
  }
  return experts;
}

void UniversalConfig::validate(const Domain& inner_domain) const {
  if (horizon < 2) throw ConfigError("horizon must be at least 2");
  if (!(G > 0.0) || !std::isfinite(G)) throw ConfigError("G must be positive");
  if (!(D > 0.0) || !std::isfinite(D)) throw ConfigError("D must be positive");
  if (D < inner_domain.radius_bound() * (1.0 - 1e-12)) {
    throw ConfigError("outer ball radius D does not contain the feasible domain");
  }
}

UniversalState universal_init(const UniversalConfig& config, const Domain& inner_domain,
                              const std::vector<ExpertConfig>& experts) {
  config.validate(inner_domain);
  if (experts.empty()) throw ConfigError("expert set is empty");
  UniversalState state;
  state.experts.reserve(experts.size());
  for (const auto& e : experts) state.experts.push_back(expert_init(e, inner_domain.dimension()));
  state.meta = meta_init(experts.size());
  state.last_y = Vector::Zero(inner_domain.dimension());
  state.last_x = Vector::Zero(inner_domain.dimension());
  return state;
}

namespace {

struct Aggregate {
  std::vector<double> weights;
  std::vector<Vector> predictions;
  Vector y;
};

Aggregate aggregate(const UniversalState& state, int dimension) {
  Aggregate agg;
  agg.weights = meta_weights(state.meta);
  agg.predictions.reserve(state.experts.size());
  agg.y = Vector::Zero(dimension);
  for (std::size_t i = 0; i < state.experts.size(); ++i) {
    agg.predictions.push_back(expert_predict(state.experts[i]));
    agg.y.noalias() += agg.weights[i] * agg.predictions.back();
  }
  return agg;
}

Vector query(const GradientOracle& oracle, const Vector& x) {
  Vector grad = oracle(x);
  if (grad.size() != x.size()) throw DimensionMismatch("gradient oracle", grad.size(), x.size());
  if (!grad.allFinite()) throw OracleError("gradient oracle returned non-finite values");
  return grad;
}

void score_experts(RoundReport& report, const UniversalConfig& config) {
  report.meta_losses.resize(report.expert_predictions.size());
  report.aggregate_meta_loss = 0.0;
  for (std::size_t i = 0; i < report.expert_predictions.size(); ++i) {
    report.meta_losses[i] = normalize_meta_loss(report.surr_grad, report.expert_predictions[i],
                                                report.y, config.G, config.D);
    report.aggregate_meta_loss += report.weights[i] * report.meta_losses[i];
  }
}

void check_round(const UniversalState& state, const UniversalConfig& config) {
  if (state.round > config.horizon) throw Error("round index exceeds the configured horizon");
}

}  // namespace

std::pair<UniversalState, RoundReport> universal_round(const UniversalState& state,
                                                       const UniversalConfig& config,
                                                       const std::vector<ExpertConfig>& experts,
                                                       const Domain& inner_domain,
                                                       const GradientOracle& oracle) {
  check_round(state, config);
  Aggregate agg = aggregate(state, inner_domain.dimension());

  RoundReport report;
  report.weights = std::move(agg.weights);
  report.expert_predictions = std::move(agg.predictions);
  report.y = agg.y;
  report.x = inner_domain.project(agg.y);  // the only projection onto X this round
  report.projections = 1;

  Vector grad = query(oracle, report.x);
  report.ctx = make_context(report.y, report.x, std::move(grad),
                            inner_domain.projection_tolerance());
  report.surr_grad = surrogate_grad(report.ctx);
  report.delta = report.ctx.alignment >= 0.0
                     ? report.ctx.grad_f.dot(report.ctx.y - report.ctx.x)
                     : 0.0;
  score_experts(report, config);

  UniversalState next;
  next.experts = kernels::update_experts(state.experts, experts, report.ctx, report.surr_grad,
                                         nullptr, config.execution);
  next.meta = meta_update(state.meta, report.meta_losses, report.aggregate_meta_loss);
  next.last_y = report.y;
  next.last_x = report.x;
  next.round = state.round + 1;
  next.projection_count = state.projection_count + report.projections;
  return {std::move(next), std::move(report)};
}

std::pair<UniversalState, RoundReport> baseline_round(const UniversalState& state,
                                                      const UniversalConfig& config,
                                                      const std::vector<ExpertConfig>& experts,
                                                      const Domain& inner_domain,
                                                      const GradientOracle& oracle) {
  check_round(state, config);
  Aggregate agg = aggregate(state, inner_domain.dimension());

  RoundReport report;
  report.weights = std::move(agg.weights);
  report.expert_predictions = std::move(agg.predictions);
  // Experts are feasible, so their convex combination is the decision.
  report.y = agg.y;
  report.x = agg.y;

  Vector grad = query(oracle, report.x);
  report.ctx = make_context(report.y, report.x, std::move(grad),
                            inner_domain.projection_tolerance());
  report.surr_grad = report.ctx.grad_f;
  report.delta = 0.0;
  score_experts(report, config);

  UniversalState next;
  next.experts = kernels::update_experts(state.experts, experts, report.ctx, report.surr_grad,
                                         &inner_domain, config.execution);
  report.projections = experts.size();
  next.meta = meta_update(state.meta, report.meta_losses, report.aggregate_meta_loss);
  next.last_y = report.y;
  next.last_x = report.x;
  next.round = state.round + 1;
  next.projection_count = state.projection_count + report.projections;
  return {std::move(next), std::move(report)};
}

UniversalLearner::UniversalLearner(UniversalConfig config, const Domain& inner_domain)
    : UniversalLearner(config, inner_domain,
                       build_expert_grid(config.horizon, config.G, config.D, config.mode,
                                         config.ons_projection)) {}

UniversalLearner::UniversalLearner(UniversalConfig config, const Domain& inner_domain,
                                   std::vector<ExpertConfig> experts)
    : config_(config), domain_(&inner_domain), experts_(std::move(experts)) {
  state_ = universal_init(config_, *domain_, experts_);
}

RoundReport UniversalLearner::round(const GradientOracle& oracle) {
  auto [next, report] = config_.baseline
                            ? baseline_round(state_, config_, experts_, *domain_, oracle)
                            : universal_round(state_, config_, experts_, *domain_, oracle);
  state_ = std::move(next);
  return std::move(report);
}

}  // namespace uoco
