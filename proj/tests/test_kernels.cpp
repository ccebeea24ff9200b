#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "uoco/harness.hpp"
#include "uoco/kernels.hpp"
#include "uoco/universal.hpp"

using uoco::Vector;

TEST_CASE("parallel batch projection equals the serial reference") {
  const uoco::Domain dom = uoco::random_polytope(6, 30, 1.0, 4);
  uoco::Rng rng(3);
  std::vector<Vector> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(3.0 * rng.normal_vector(6));
  const auto a = uoco::kernels::project_batch_serial(dom, pts);
  const auto b = uoco::kernels::project_batch_parallel(dom, pts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(uoco::kernels::max_pairwise_distance_serial(a) ==
        uoco::kernels::max_pairwise_distance_parallel(b));
}

TEST_CASE("parallel expert update equals the serial reference") {
  const int d = 5;
  const auto configs = uoco::build_expert_grid(1 << 8, 1.0, 1.0, uoco::Mode::kMinimax);
  std::vector<uoco::ExpertState> states;
  for (const auto& c : configs) states.push_back(uoco::expert_init(c, d));
  uoco::Rng rng(7);
  const uoco::Domain box = uoco::Domain::cube(d, 0.4);
  for (int t = 0; t < 30; ++t) {
    const Vector y = rng.in_ball(d, 1.0);
    const Vector x = box.project(y);
    const Vector g = rng.in_ball(d, 1.0);
    const auto ctx = uoco::make_context(y, x, g, 1e-12);
    const uoco::Domain* feasible = t % 2 == 0 ? nullptr : &box;
    const auto a = uoco::kernels::update_experts_serial(states, configs, ctx, g, feasible);
    const auto b = uoco::kernels::update_experts_parallel(states, configs, ctx, g, feasible);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].y == b[i].y);
      CHECK(a[i].t == b[i].t);
    }
    states = a;
  }
}

TEST_CASE("expert update errors surface from both kernels") {
  auto configs = uoco::build_expert_grid(16, 1.0, 1.0, uoco::Mode::kMinimax);
  std::vector<uoco::ExpertState> states;
  for (const auto& c : configs) states.push_back(uoco::expert_init(c, 2));
  const Vector g = Vector::Ones(2);
  const auto ctx = uoco::make_context(Vector::Zero(2), Vector::Zero(2), g, 1e-12);
  const uoco::Domain wrong = uoco::Domain::ball(3, 1.0);
  CHECK_THROWS_AS(uoco::kernels::update_experts_serial(states, configs, ctx, g, &wrong),
                  uoco::DimensionMismatch);
  CHECK_THROWS_AS(uoco::kernels::update_experts_parallel(states, configs, ctx, g, &wrong),
                  uoco::DimensionMismatch);
}

TEST_CASE("parallel and serial learners produce identical trajectories") {
  const uoco::Domain dom = uoco::random_polytope(4, 12, 1.0, 2);
  uoco::ProblemFamily f;
  f.kind = uoco::FamilyKind::kExpConcaveSquared;
  f.dimension = 4;
  f.horizon = 64;
  const auto s = uoco::generate_stream(f, dom);
  uoco::RunConfig c;
  c.family = f;
  auto a = uoco::make_learner(c, dom, s);
  c.execution = uoco::Execution::kParallel;
  auto b = uoco::make_learner(c, dom, s);
  for (const auto& term : s.terms) {
    const auto oracle = [&term](const Vector& x) { return term.gradient(x); };
    CHECK(a.round(oracle).x == b.round(oracle).x);
  }
}

TEST_CASE("parallel seed sweep equals serial sweep") {
  uoco::RunConfig c;
  c.family.kind = uoco::FamilyKind::kLinearAdversarial;
  c.family.dimension = 3;
  c.family.horizon = 64;
  c.domain.kind = "box";
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
  const auto a = uoco::run_sweep(c, seeds, uoco::Execution::kSerial);
  const auto b = uoco::run_sweep(c, seeds, uoco::Execution::kParallel);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].final_regret() == b[i].final_regret());
    CHECK(a[i].total_projections == 64);
  }
  CHECK(a[0].final_regret() != a[1].final_regret());
}
