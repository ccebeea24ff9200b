#ifndef UOCO_UNIVERSAL_HPP_
#define UOCO_UNIVERSAL_HPP_

// Two-layer universal learner with a single projection onto the feasible
// domain per round.
//
// Each round: weights from the meta-algorithm, aggregate the expert
// predictions into y_t on the outer ball, project once to x_t, query the
// gradient at x_t, form the surrogate gradient, then update meta and experts
// from it alone. The multi-projection baseline keeps every expert inside the
// feasible domain instead and pays one projection per expert per round.

#include <cstdint>
#include <functional>
#include <vector>

#include "uoco/domains.hpp"
#include "uoco/experts.hpp"
#include "uoco/kernels.hpp"
#include "uoco/meta.hpp"
#include "uoco/surrogate.hpp"

namespace uoco {

enum class Mode { kMinimax, kSmallLoss };

/// {2^k / T : k = 0..ceil(log2 T)} clipped to 1 and deduplicated, ascending.
std::vector<double> modulus_grid(long horizon);

/// One convex expert, one ONS expert per alpha in the grid, one strongly
/// convex expert per lambda in the grid. Smooth variants in kSmallLoss mode.
std::vector<ExpertConfig> build_expert_grid(long horizon, double G, double D, Mode mode,
                                            OnsProjection ons = OnsProjection::kExact);

struct UniversalConfig {
  long horizon = 2;
  double G = 1.0;
  double D = 1.0;
  Mode mode = Mode::kMinimax;
  bool baseline = false;
  std::uint64_t seed = 0;
  OnsProjection ons_projection = OnsProjection::kExact;
  Execution execution = Execution::kSerial;

  /// T >= 2, G > 0, and the outer ball of radius D contains the domain.
  void validate(const Domain& inner_domain) const;
};

struct UniversalState {
  std::vector<ExpertState> experts;
  MetaState meta;
  Vector last_y;
  Vector last_x;
  long round = 1;
  std::uint64_t projection_count = 0;
};

using GradientOracle = std::function<Vector(const Vector& x)>;

/// Everything computed in one round; the audit and trace writers read it.
struct RoundReport {
  Vector x;
  Vector y;
  std::vector<double> weights;
  std::vector<Vector> expert_predictions;
  SurrogateContext ctx;
  Vector surr_grad;
  std::vector<double> meta_losses;
  double aggregate_meta_loss = 0.0;
  /// 1{<grad_f, v> >= 0} <grad_f, y_t - x_t>
  double delta = 0.0;
  std::uint64_t projections = 0;
};

class UniversalLearner {
 public:
  /// Builds the expert grid from the config.
  UniversalLearner(UniversalConfig config, const Domain& inner_domain);
  /// Custom expert set (single-expert runs, tests).
  UniversalLearner(UniversalConfig config, const Domain& inner_domain,
                   std::vector<ExpertConfig> experts);

  /// Plays one round. On any exception the state is left unchanged.
  RoundReport round(const GradientOracle& oracle);

  const UniversalState& state() const noexcept { return state_; }
  const std::vector<ExpertConfig>& experts() const noexcept { return experts_; }
  const UniversalConfig& config() const noexcept { return config_; }
  const Domain& domain() const noexcept { return *domain_; }

 private:
  UniversalConfig config_;
  const Domain* domain_;
  std::vector<ExpertConfig> experts_;
  UniversalState state_;
};

UniversalState universal_init(const UniversalConfig& config, const Domain& inner_domain,
                              const std::vector<ExpertConfig>& experts);

/// One-projection round as a pure function of the previous state.
std::pair<UniversalState, RoundReport> universal_round(const UniversalState& state,
                                                       const UniversalConfig& config,
                                                       const std::vector<ExpertConfig>& experts,
                                                       const Domain& inner_domain,
                                                       const GradientOracle& oracle);

/// Multi-projection reference round: experts live in the feasible domain and
/// see the plain linearised loss; |experts| projections per round.
std::pair<UniversalState, RoundReport> baseline_round(const UniversalState& state,
                                                      const UniversalConfig& config,
                                                      const std::vector<ExpertConfig>& experts,
                                                      const Domain& inner_domain,
                                                      const GradientOracle& oracle);

}  // namespace uoco

#endif  // UOCO_UNIVERSAL_HPP_
