#ifndef UOCO_KERNELS_HPP_
#define UOCO_KERNELS_HPP_

// Data-parallel kernels. Each has an OpenMP version and a serial reference
// that tests compare against; both produce identical results element-wise.

#include <vector>

#include "uoco/domains.hpp"
#include "uoco/experts.hpp"
#include "uoco/surrogate.hpp"

namespace uoco {

enum class Execution { kSerial, kParallel };

namespace kernels {

std::vector<Vector> project_batch_serial(const Domain& domain, const std::vector<Vector>& points);
std::vector<Vector> project_batch_parallel(const Domain& domain,
                                           const std::vector<Vector>& points);
std::vector<Vector> project_batch(const Domain& domain, const std::vector<Vector>& points,
                                  Execution exec);

/// Updates every expert with the same round context. The first exception
/// thrown by any expert is rethrown after the loop.
std::vector<ExpertState> update_experts_serial(const std::vector<ExpertState>& states,
                                               const std::vector<ExpertConfig>& configs,
                                               const SurrogateContext& ctx,
                                               const Vector& surr_grad,
                                               const Domain* feasible);
std::vector<ExpertState> update_experts_parallel(const std::vector<ExpertState>& states,
                                                 const std::vector<ExpertConfig>& configs,
                                                 const SurrogateContext& ctx,
                                                 const Vector& surr_grad,
                                                 const Domain* feasible);
std::vector<ExpertState> update_experts(const std::vector<ExpertState>& states,
                                        const std::vector<ExpertConfig>& configs,
                                        const SurrogateContext& ctx, const Vector& surr_grad,
                                        const Domain* feasible, Execution exec);

/// Largest pairwise distance in a point set.
double max_pairwise_distance_serial(const std::vector<Vector>& points);
double max_pairwise_distance_parallel(const std::vector<Vector>& points);

}  // namespace kernels
}  // namespace uoco

#endif  // UOCO_KERNELS_HPP_
