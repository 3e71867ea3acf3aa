// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include <doctest.h>

#include "parmor/lbfgs.hpp"
#include "support/random.hpp"

using namespace parmor;
using test::Rng;

namespace {

double quadratic(const Vec &center, const Vec &x, Vec &grad)
{
  grad = x - center;
  return 0.5 * grad.squaredNorm();
}

double rosenbrock(const Vec &x, Vec &grad)
{
  const double a = x[0], b = x[1];
  grad.resize(2);
  grad[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
  grad[1] = 200.0 * (b - a * a);
  return (1.0 - a) * (1.0 - a) + 100.0 * (b - a * a) * (b - a * a);
}

} // namespace

TEST_CASE("quadratic bowl is minimized to working precision in few steps")
{
  const Index n = 10;
  Rng rng(1);
  const Vec center = rng.vector(n, -2.0, 2.0);
  const Vec start = rng.vector(n, -5.0, 5.0);

  MinimizeOptions opts;
  opts.grad_tol = 1e-9;
  const MinimizeResult res = minimize(
    [&](const Vec &x, Vec &g) { return quadratic(center, x, g); }, start, opts);

  CHECK(res.status == MinimizeStatus::GradientTol);
  CHECK(res.iterations <= n + 5);
  CHECK((res.theta - center).norm() < 1e-8);
}

TEST_CASE("rosenbrock valley is traversed from the classic start")
{
  Vec start(2);
  start << -1.2, 1.0;

  MinimizeOptions opts;
  opts.grad_tol = 1e-10;
  opts.max_iters = 2000;
  const MinimizeResult res = minimize(rosenbrock, start, opts);

  CHECK(res.value < 1e-8);
  CHECK(res.theta[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(res.theta[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("accepted values never increase")
{
  Vec start(2);
  start << -1.2, 1.0;
  const MinimizeResult res = minimize(rosenbrock, start, {});

  REQUIRE(!res.history.empty());
  for (size_t k = 1; k < res.history.size(); k++)
  {
    CHECK(res.history[k] <= res.history[k - 1]);
  }
  CHECK(res.history.back() == res.value);
  CHECK(res.evaluations >= res.iterations);
}

TEST_CASE("value target stops the solver early")
{
  const Index n = 6;
  Rng rng(2);
  const Vec center = rng.vector(n, -1.0, 1.0);
  const Vec start = center + Vec::Constant(n, 3.0);

  MinimizeOptions opts;
  opts.f_target = 0.1;
  const MinimizeResult res = minimize(
    [&](const Vec &x, Vec &g) { return quadratic(center, x, g); }, start, opts);

  CHECK(res.status == MinimizeStatus::FTarget);
  CHECK(res.value <= 0.1);
}

TEST_CASE("iteration cap is honored")
{
  Vec start(2);
  start << -1.2, 1.0;
  MinimizeOptions opts;
  opts.max_iters = 3;
  opts.grad_tol = 0.0;
  const MinimizeResult res = minimize(rosenbrock, start, opts);
  CHECK(res.status == MinimizeStatus::MaxIters);
  CHECK(res.iterations == 3);
}

TEST_CASE("a non-finite objective raises an optimization error")
{
  const auto bad = [](const Vec &x, Vec &g) {
    g = x;
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS((void)minimize(bad, Vec::Ones(2), {}), OptimizationError);
}

TEST_CASE("an already optimal start returns immediately")
{
  Vec center = Vec::Zero(3);
  const MinimizeResult res = minimize(
    [&](const Vec &x, Vec &g) { return quadratic(center, x, g); }, center, {});
  CHECK(res.status == MinimizeStatus::GradientTol);
  CHECK(res.iterations == 0);
  CHECK(res.value == 0.0);
}

TEST_CASE("separate value and gradient callbacks work through the overload")
{
  const Index n = 4;
  Rng rng(3);
  const Vec center = rng.vector(n);
  const auto f = [&](const Vec &x) { return 0.5 * (x - center).squaredNorm(); };
  const auto g = [&](const Vec &x) { return Vec(x - center); };

  const MinimizeResult res = minimize(f, g, Vec::Zero(n), {});
  CHECK((res.theta - center).norm() < 1e-6);
}

TEST_CASE("an ill-conditioned quadratic still converges")
{
  const Index n = 12;
  Vec scales(n);
  for (Index i = 0; i < n; i++)
  {
    scales[i] = std::pow(10.0, 3.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  const auto fg = [&](const Vec &x, Vec &g) {
    g = scales.cwiseProduct(x);
    return 0.5 * x.dot(g);
  };

  MinimizeOptions opts;
  opts.grad_tol = 1e-9;
  opts.max_iters = 500;
  Rng rng(4);
  const MinimizeResult res = minimize(fg, rng.vector(n, -1.0, 1.0), opts);
  CHECK(res.status == MinimizeStatus::GradientTol);
  CHECK(res.value < 1e-16);
}
