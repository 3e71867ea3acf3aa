// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "parmor/scalar_function.hpp"

#include "support/random.hpp"

using namespace parmor;

TEST_SUITE("scalar_function")
{
  TEST_CASE("hat peaks at the midpoint and vanishes at the ends")
  {
    test::Rng rng(11);
    for (int t = 0; t < 20; t++)
    {
      double a = rng.uniform(-5, 5);
      double b = a + rng.uniform(0.1, 4.0);
      CHECK(hat(0.5 * (a + b), a, b) == doctest::Approx(1.0));
      CHECK(hat(a, a, b) == 0.0);
      CHECK(hat(b, a, b) == 0.0);
      CHECK(hat(a - 1.0, a, b) == 0.0);
      CHECK(hat(b + 1.0, a, b) == 0.0);
    }
  }

  TEST_CASE("hat piecewise-linear values")
  {
    CHECK(hat(0.25, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(hat(0.75, 0.0, 1.0) == doctest::Approx(0.5));
    // Continuity across the peak and the knots.
    for (double x : {1e-12, 0.5 - 1e-12, 0.5 + 1e-12, 1.0 - 1e-12})
    {
      CHECK(hat(x, 0.0, 1.0) == doctest::Approx(hat(x + 1e-13, 0.0, 1.0)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(hat(0.0, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(hat(0.0, 2.0, 1.0), ParameterError);
  }

  TEST_CASE("hat values always lie in [0,1]")
  {
    test::Rng rng(12);
    for (int t = 0; t < 500; t++)
    {
      double a = rng.uniform(-3, 3), b = a + rng.uniform(0.01, 5.0);
      double v = hat(rng.uniform(-5, 5), a, b);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  TEST_CASE("kinds evaluate as declared")
  {
    Vec p(2);
    p << 0.75, -2.0;
    CHECK(ScalarFunction::constant(3.5)(p) == 3.5);
    CHECK(ScalarFunction::hat_bump(0, 0.0, 1.0)(p) == doctest::Approx(0.5));
    CHECK(ScalarFunction::linear(1, 1.0, 2.0)(p) == doctest::Approx(-3.0));
    auto f = ScalarFunction::user([](const Vec &q) { return q.sum(); });
    CHECK(f(p) == doctest::Approx(-1.25));
    CHECK_THROWS_AS(ScalarFunction::hat_bump(5, 0.0, 1.0)(p), DimensionError);
  }

  TEST_CASE("nonnegativity certification")
  {
    CHECK(ScalarFunction::constant(0.0).certified_nonnegative());
    CHECK(ScalarFunction::constant(2.0).certified_nonnegative());
    CHECK(!ScalarFunction::constant(-1e-30).certified_nonnegative());
    CHECK(ScalarFunction::hat_bump(0, 0, 1).certified_nonnegative());
    CHECK(!ScalarFunction::linear(0, 0, 1).certified_nonnegative());
    CHECK(!ScalarFunction::user([](const Vec &) { return 1.0; }).certified_nonnegative());
  }

  TEST_CASE("describe/parse round-trip preserves evaluation exactly")
  {
    test::Rng rng(13);
    Vec p(3);
    for (int t = 0; t < 50; t++)
    {
      p = rng.vector(3, -2, 2);
      double a = rng.uniform(-2, 2), b = a + rng.uniform(0.1, 3.0);
      std::vector<ScalarFunction> fns = {
          ScalarFunction::constant(rng.uniform(-10, 10)),
          ScalarFunction::hat_bump(rng.integer(0, 2), a, b),
          ScalarFunction::linear(rng.integer(0, 2), rng.uniform(-3, 3),
                                 rng.uniform(-3, 3)),
      };
      for (const auto &f : fns)
      {
        ScalarFunction g = ScalarFunction::parse(f.describe());
        CHECK(g(p) == f(p));
        CHECK(g.describe() == f.describe());
      }
    }
    CHECK_THROWS_AS(ScalarFunction::parse("bogus 1 2"), ParameterError);
    CHECK_THROWS_AS(ScalarFunction::parse("const"), ParameterError);
    CHECK_THROWS_AS(ScalarFunction::parse("hat 0 1"), ParameterError);
    CHECK_THROWS_AS(ScalarFunction::parse("const 1 junk"), ParameterError);
    CHECK_THROWS_AS(
        ScalarFunction::user([](const Vec &) { return 0.0; }).describe(),
        StructureError);
  }

  TEST_CASE("uniform hat family is a partition of unity")
  {
    test::Rng rng(14);
    for (Index kappa : {2, 3, 5, 8})
    {
      auto fams = uniform_hat_family(kappa, 0, 0.5, 1.5);
      REQUIRE(static_cast<Index>(fams.size()) == kappa);
      Vec p(1);
      for (int t = 0; t < 200; t++)
      {
        p[0] = rng.uniform(0.5, 1.5);
        double sum = 0.0;
        for (const auto &f : fams)
        {
          sum += f(p);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
    // Degenerate family: a single constant 1.
    auto one = uniform_hat_family(1, 0, 0.0, 1.0);
    REQUIRE(one.size() == 1);
    Vec p(1);
    p << 0.3;
    CHECK(one[0](p) == 1.0);
    CHECK_THROWS_AS(uniform_hat_family(0, 0, 0, 1), ParameterError);
  }

  TEST_CASE("kappa=2 family on [0.5,1.5] spans the whole interval")
  {
    // Knots at 0.5 and 1.5 with spacing 1: the two hats cross at the center
    // and neither vanishes on an interior subinterval.
    auto fams = uniform_hat_family(2, 0, 0.5, 1.5);
    Vec p(1);
    p << 0.5;
    CHECK(fams[0](p) == doctest::Approx(1.0));
    CHECK(fams[1](p) == doctest::Approx(0.0));
    p << 1.5;
    CHECK(fams[0](p) == doctest::Approx(0.0));
    CHECK(fams[1](p) == doctest::Approx(1.0));
    p << 1.0;
    CHECK(fams[0](p) == doctest::Approx(0.5));
    CHECK(fams[1](p) == doctest::Approx(0.5));
  }
}
