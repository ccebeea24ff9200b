// Serial vs OpenMP kernels, and one-projection vs multi-projection rounds.

#include <benchmark/benchmark.h>

#include "uoco/harness.hpp"
#include "uoco/kernels.hpp"
#include "uoco/streams.hpp"
#include "uoco/universal.hpp"

namespace {

std::vector<uoco::Vector> far_points(int d, int n, double reach) {
  uoco::Rng rng(11);
  std::vector<uoco::Vector> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.normal_vector(d).normalized() * reach);
  return pts;
}

void BM_ProjectBatch(benchmark::State& state, uoco::Execution exec) {
  const int d = static_cast<int>(state.range(0));
  const uoco::Domain domain = uoco::random_polytope(d, 50, 1.0, 3);
  const auto pts = far_points(d, 64, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uoco::kernels::project_batch(domain, pts, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK_CAPTURE(BM_ProjectBatch, serial, uoco::Execution::kSerial)->Arg(4)->Arg(16);
BENCHMARK_CAPTURE(BM_ProjectBatch, parallel, uoco::Execution::kParallel)->Arg(4)->Arg(16);

void BM_UpdateExperts(benchmark::State& state, uoco::Execution exec) {
  const int d = static_cast<int>(state.range(0));
  const long T = 1 << 12;
  const auto configs = uoco::build_expert_grid(T, 1.0, 1.0, uoco::Mode::kMinimax);
  std::vector<uoco::ExpertState> states;
  for (const auto& c : configs) states.push_back(uoco::expert_init(c, d));
  uoco::Rng rng(5);
  const uoco::Vector y = rng.in_ball(d, 1.0);
  const uoco::Vector g = rng.normal_vector(d).normalized();
  const auto ctx = uoco::make_context(y, y, g, 1e-8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        uoco::kernels::update_experts(states, configs, ctx, g, nullptr, exec));
  }
}
BENCHMARK_CAPTURE(BM_UpdateExperts, serial, uoco::Execution::kSerial)->Arg(4)->Arg(16);
BENCHMARK_CAPTURE(BM_UpdateExperts, parallel, uoco::Execution::kParallel)->Arg(4)->Arg(16);

void BM_Round(benchmark::State& state, uoco::Algo algo) {
  const int d = 16;
  const long T = 1 << 10;
  const uoco::Domain domain = uoco::random_polytope(d, 50, 1.0, 3);
  uoco::ProblemFamily family;
  family.kind = uoco::FamilyKind::kLinearAdversarial;
  family.dimension = d;
  family.horizon = T;
  const auto stream = uoco::generate_stream(family, domain);
  uoco::RunConfig config;
  config.algo = algo;
  auto learner = uoco::make_learner(config, domain, stream);
  long t = 0;
  for (auto _ : state) {
    if (t == T) {
      state.PauseTiming();
      learner = uoco::make_learner(config, domain, stream);
      t = 0;
      state.ResumeTiming();
    }
    const auto& term = stream.terms[t++];
    benchmark::DoNotOptimize(learner.round([&](const uoco::Vector& x) { return term.gradient(x); }));
  }
}
BENCHMARK_CAPTURE(BM_Round, universal, uoco::Algo::kUniversal)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Round, baseline, uoco::Algo::kBaseline)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
