#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sampling.hpp"
#include "uoco/surrogate.hpp"

using uoco::Domain;
using uoco::Vector;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("context examples on the unit ball") {
  const Domain ball = Domain::ball(2, 1.0);
  auto ctx = uoco::build_context(v2(2, 0), v2(1, 0), ball);
  CHECK(ctx.x.isApprox(v2(1, 0)));
  CHECK(ctx.v.isApprox(v2(1, 0)));
  CHECK(ctx.alignment == doctest::Approx(1.0));
  CHECK_FALSE(ctx.inward);

  ctx = uoco::build_context(v2(0.5, 0), v2(3, -1), ball);
  CHECK(ctx.x == v2(0.5, 0));
  CHECK(ctx.v == v2(0, 0));
  CHECK_FALSE(ctx.inward);

  ctx = uoco::build_context(v2(2, 0), v2(-1, 0), ball);
  CHECK(ctx.alignment == doctest::Approx(-1.0));
  CHECK(ctx.inward);
}

TEST_CASE("surrogate value examples") {
  const Domain ball = Domain::ball(2, 1.0);
  const auto out = uoco::build_context(v2(2, 0), v2(1, 0), ball);
  CHECK(uoco::surrogate_value(out, v2(3, 1), ball) == doctest::Approx(3.0));

  const auto in = uoco::build_context(v2(2, 0), v2(-1, 0), ball);
  CHECK(uoco::surrogate_value(in, v2(2, 0), ball) == doctest::Approx(-1.0));
  CHECK(uoco::surrogate_value(in, v2(0.5, 0), ball) == doctest::Approx(-0.5));
}

TEST_CASE("surrogate gradient examples") {
  const Domain ball = Domain::ball(2, 1.0);
  CHECK(uoco::surrogate_grad(uoco::build_context(v2(2, 0), v2(1, 0), ball)) == v2(1, 0));
  const Vector g0 = uoco::surrogate_grad(uoco::build_context(v2(2, 0), v2(-1, 0), ball));
  CHECK(g0.norm() <= 1e-15);
  const Vector g1 = uoco::surrogate_grad(uoco::build_context(v2(2, 0), v2(-1, 1), ball));
  CHECK((g1 - v2(0, 1)).norm() <= 1e-15);
  CHECK(g1.norm() <= v2(-1, 1).norm());
}

TEST_CASE("legacy surrogate") {
  const Domain ball = Domain::ball(2, 1.0);
  const auto ctx = uoco::build_context(v2(2, 0), v2(1, 0), ball);
  // The naive gradient formula doubles the norm here.
  CHECK(uoco::legacy_surrogate_grad(ctx).isApprox(v2(2, 0)));
  CHECK(uoco::legacy_surrogate_value(ctx, v2(0.3, 0.2), ball) == doctest::Approx(0.3));

  // Value inequality: <gf, x_t - x> <= ghat(y_t) - ghat(x) for x in X.
  uoco::Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const Domain dom = sampling::random_domain(trial % 4, 3, rng);
    const Vector y = sampling::random_outer_point(dom, rng);
    const Vector gf = rng.normal_vector(3);
    const Vector x = dom.project(rng.in_ball(3, 2.0));
    const auto c = uoco::build_context(y, gf, dom);
    const double rhs = uoco::legacy_surrogate_value(c, y, dom) -
                       uoco::legacy_surrogate_value(c, x, dom);
    CHECK(gf.dot(c.x - x) <= rhs + 1e-6);
  }
}

TEST_CASE("surrogate invariants on random tuples") {
  uoco::Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const int kind = trial % 4;
    const int d = 1 + trial % 5;
    const Domain dom = sampling::random_domain(kind, d, rng);
    const Vector y = sampling::random_outer_point(dom, rng);
    const Vector gf = rng.normal_vector(d);
    const Vector x = dom.project(rng.in_ball(d, 2.0 * dom.radius_bound()));
    const double slack = kind == 3 ? 1e-6 : 1e-9;
    const auto c = sampling::check_surrogate(dom, y, gf, x);
    CHECK(c.value_lower <= slack);
    CHECK(c.value_upper <= slack);
    CHECK(c.linearized <= slack);
    CHECK(c.boundary <= slack);
    CHECK(c.delta_negative <= 1e-12);
    CHECK(c.norm_excess <= 1e-12);
  }
}

TEST_CASE("surrogate is convex on the outer ball") {
  uoco::Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const int kind = trial % 3;
    const int d = 2 + trial % 3;
    const Domain dom = sampling::random_domain(kind, d, rng);
    const double D = dom.radius_bound();
    const auto ctx = uoco::build_context(rng.in_ball(d, D), rng.normal_vector(d), dom);
    const Vector a = rng.in_ball(d, D), b = rng.in_ball(d, D);
    const double th = rng.uniform();
    const double mid = uoco::surrogate_value(ctx, th * a + (1 - th) * b, dom);
    CHECK(mid <= th * uoco::surrogate_value(ctx, a, dom) +
                     (1 - th) * uoco::surrogate_value(ctx, b, dom) + 1e-9);
  }
}

TEST_CASE("surrogate gradient matches finite differences at exterior points") {
  uoco::Rng rng(8);
  const double h = 1e-6;
  int exterior = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int kind = trial % 3;
    const int d = 2 + trial % 4;
    const Domain dom = sampling::random_domain(kind, d, rng);
    const Vector y = rng.in_ball(d, 2.0 * dom.radius_bound());
    if (dom.distance_to(y) <= 10 * h) continue;
    ++exterior;
    const auto ctx = uoco::build_context(y, rng.normal_vector(d), dom);
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& p) { return uoco::surrogate_value(ctx, p, dom); }, y, h);
    const Vector g = uoco::surrogate_grad(ctx);
    CHECK((fd - g).norm() <= 1e-5 * std::max(1.0, g.norm()));
  }
  CHECK(exterior > 100);
}

TEST_CASE("context errors") {
  const Domain ball = Domain::ball(2, 1.0);
  Vector bad = v2(1, 0);
  bad[0] = std::nan("");
  CHECK_THROWS_AS(uoco::build_context(v2(2, 0), bad, ball), uoco::OracleError);
  CHECK_THROWS_AS(uoco::make_context(v2(2, 0), Vector::Zero(3), v2(1, 0), 0.0),
                  uoco::DimensionMismatch);
}
