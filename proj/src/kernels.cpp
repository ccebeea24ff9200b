#include "uoco/kernels.hpp"

#include <algorithm>
#include <exception>

namespace uoco::kernels {

namespace {

// Rethrows the first captured exception, if any, on the calling thread.
class FirstError {
 public:
  void capture() {
#pragma omp critical(uoco_first_error)
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

std::vector<Vector> project_batch_serial(const Domain& domain,
                                         const std::vector<Vector>& points) {
  std::vector<Vector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(domain.project(p));
  return out;
}

std::vector<Vector> project_batch_parallel(const Domain& domain,
                                           const std::vector<Vector>& points) {
  const long n = static_cast<long>(points.size());
  std::vector<Vector> out(points.size());
  FirstError err;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = domain.project(points[i]);
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  return out;
}

std::vector<Vector> project_batch(const Domain& domain, const std::vector<Vector>& points,
                                  Execution exec) {
  return exec == Execution::kParallel ? project_batch_parallel(domain, points)
                                      : project_batch_serial(domain, points);
}

std::vector<ExpertState> update_experts_serial(const std::vector<ExpertState>& states,
                                               const std::vector<ExpertConfig>& configs,
                                               const SurrogateContext& ctx,
                                               const Vector& surr_grad,
                                               const Domain* feasible) {
  std::vector<ExpertState> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.push_back(expert_update(states[i], configs[i], ctx, surr_grad, feasible));
  }
  return out;
}

std::vector<ExpertState> update_experts_parallel(const std::vector<ExpertState>& states,
                                                 const std::vector<ExpertConfig>& configs,
                                                 const SurrogateContext& ctx,
                                                 const Vector& surr_grad,
                                                 const Domain* feasible) {
  const long n = static_cast<long>(states.size());
  std::vector<ExpertState> out(states.size());
  FirstError err;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = expert_update(states[i], configs[i], ctx, surr_grad, feasible);
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  return out;
}

std::vector<ExpertState> update_experts(const std::vector<ExpertState>& states,
                                        const std::vector<ExpertConfig>& configs,
                                        const SurrogateContext& ctx, const Vector& surr_grad,
                                        const Domain* feasible, Execution exec) {
  return exec == Execution::kParallel
             ? update_experts_parallel(states, configs, ctx, surr_grad, feasible)
             : update_experts_serial(states, configs, ctx, surr_grad, feasible);
}

double max_pairwise_distance_serial(const std::vector<Vector>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

double max_pairwise_distance_parallel(const std::vector<Vector>& points) {
  const long n = static_cast<long>(points.size());
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

}  // namespace uoco::kernels
