// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <limits>

#include <doctest.h>

#include "parmor/metrics.hpp"
#include "support/sources.hpp"

using namespace parmor;

namespace {

// Scalar transfer function defined by a lambda of (s, p).
class ScalarSource : public TransferSource {
public:
  using Fn = std::function<Complex(Complex, const Vec &)>;

  ScalarSource(Fn fn, Box domain) : fn_(std::move(fn)), domain_(std::move(domain)) {}

  Index n_u() const override { return 1; }
  Index n_y() const override { return 1; }
  const Box &domain() const override { return domain_; }
  CMat eval(Complex s, const Vec &p) const override
  {
    CMat h(1, 1);
    h(0, 0) = fn_(s, p);
    return h;
  }

private:
  Fn fn_;
  Box domain_;
};

// Fails on a configurable log-frequency band; used to exercise skip logic.
class BandFailSource : public TransferSource {
public:
  BandFailSource(double z_lo, double z_hi, Box domain)
    : z_lo_(z_lo), z_hi_(z_hi), domain_(std::move(domain))
  {
  }

  Index n_u() const override { return 1; }
  Index n_y() const override { return 1; }
  const Box &domain() const override { return domain_; }
  CMat eval(Complex s, const Vec &) const override
  {
    const double z = std::log10(std::abs(s.imag()));
    if (z > z_lo_ && z < z_hi_)
    {
      throw EvaluationError("synthetic failure band");
    }
    CMat h(1, 1);
    h(0, 0) = Complex(1.0, 0.0) / (s + 1.0);
    return h;
  }

private:
  double z_lo_, z_hi_;
  Box domain_;
};

ScalarSource first_order(double gain_slope = 0.0)
{
  // H(s, p) = (1 + gain_slope (p - 1)) / (s + 1); slope 0 drops p entirely.
  return ScalarSource(
      [gain_slope](Complex s, const Vec &p) {
        const double gain = 1.0 + (p.size() > 0 ? gain_slope * (p[0] - 1.0) : 0.0);
        return gain / (s + 1.0);
      },
      test::unit_domain());
}

ScalarSource zero_source()
{
  return ScalarSource([](Complex, const Vec &) { return Complex(0.0, 0.0); },
                      test::unit_domain());
}

Vec p1(double v)
{
  return Vec::Constant(1, v);
}

} // namespace

TEST_CASE("grid builders produce sorted covering grids")
{
  const Vec w = log_omega_grid(1e-3, 1e3, 7);
  REQUIRE(w.size() == 7);
  CHECK(w[0] == 1e-3);
  CHECK(w[6] == 1e3);
  for (Index i = 1; i < 7; i++)
  {
    CHECK(w[i] / w[i - 1] == doctest::Approx(10.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)log_omega_grid(0.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS((void)log_omega_grid(1.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS((void)log_omega_grid(1e-3, 1e3, 1), ParameterError);

  const Vec a = uniform_axis(0.5, 1.5, 5);
  REQUIRE(a.size() == 5);
  CHECK(a[0] == 0.5);
  CHECK(a[4] == 1.5);
  CHECK(a[2] == doctest::Approx(1.0));
  CHECK(uniform_axis(2.0, 2.0, 1)[0] == 2.0);

  const std::vector<Vec> pts = tensor_points({uniform_axis(0, 1, 2), uniform_axis(5, 7, 3)});
  REQUIRE(pts.size() == 6);
  CHECK(pts[0][0] == 0.0);
  CHECK(pts[0][1] == 5.0);
  CHECK(pts[1][1] == 6.0);
  CHECK(pts[3][0] == 1.0);
  CHECK(pts[3][1] == 5.0);
  CHECK(tensor_points({}).size() == 1);
  CHECK(tensor_points({})[0].size() == 0);
}

TEST_CASE("identical models have zero error in every metric")
{
  CMat m(1, 1);
  m(0, 0) = Complex(0.7, -0.2);
  const test::ConstSource fom(m, test::unit_domain());
  const test::ConstSource rom(m, test::unit_domain());

  const HinfEstimate est = hinf_estimate(fom, rom, p1(0.5), default_omega_grid());
  CHECK(est.value == 0.0);
  CHECK(est.skipped == 0);

  const double h2 = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 11)},
                                   log_omega_grid(1e-3, 1e3, 200));
  CHECK(h2 == 0.0);
}

TEST_CASE("first-order decay: peak at the low end, energy norm closed form")
{
  const ScalarSource fom = first_order();
  const ScalarSource rom = zero_source();

  // sup |1/(i w + 1)| = 1 as w -> 0; the grid edge sits at 1e-3.
  const HinfEstimate est = hinf_estimate(fom, rom, p1(1.0), default_omega_grid());
  CHECK(std::abs(est.value - 1.0) < 1e-6);
  CHECK(est.argmax_omega == doctest::Approx(1e-3).epsilon(1e-9));

  // Energy norm of 1/(s+1) is sqrt(1/2).
  const double expected = 1.0 / std::sqrt(2.0);
  const double h2 = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 11)},
                                   log_omega_grid(1e-3, 1e3, 2000));
  CHECK(std::abs(h2 - expected) < 0.01 * expected);

  // Grid doubling barely moves the estimate.
  const double h2_fine = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 11)},
                                        log_omega_grid(1e-3, 1e3, 4000));
  CHECK(std::abs(h2_fine - h2) / h2 < 1e-3);
}

TEST_CASE("golden-section polish nails an interior resonance")
{
  const double d = 0.2;
  const ScalarSource fom(
      [d](Complex s, const Vec &) { return 1.0 / (s * s + d * s + 1.0); },
      test::unit_domain());
  const ScalarSource rom = zero_source();

  // |H(i w)| peaks at w = sqrt(1 - d^2/2) with value 1/(d sqrt(1 - d^2/4)).
  const double peak = 1.0 / (d * std::sqrt(1.0 - d * d / 4.0));
  const double w_peak = std::sqrt(1.0 - d * d / 2.0);

  const Vec grid = log_omega_grid(1e-2, 1e2, 50);
  const HinfEstimate est = hinf_estimate(fom, rom, p1(0.5), grid);
  CHECK(std::abs(est.value - peak) / peak < 1e-6);
  CHECK(std::abs(est.argmax_omega - w_peak) / w_peak < 1e-3);

  // The polish can only improve on the raw grid maximum.
  double grid_max = 0.0;
  for (Index i = 0; i < grid.size(); i++)
  {
    grid_max = std::max(grid_max, error_sigma(fom, rom, grid[i], p1(0.5)));
  }
  CHECK(est.value >= grid_max);

  // More grid points never lower the estimate (nested grids).
  const HinfEstimate coarse = hinf_estimate(fom, rom, p1(0.5), log_omega_grid(1e-2, 1e2, 25));
  CHECK(est.value >= coarse.value - 1e-12);
}

TEST_CASE("composite worst case over parameters matches a brute-force loop")
{
  const ScalarSource fom = first_order(1.0); // gain p/(s+1) on [0.5, 1.5]
  const ScalarSource rom = zero_source();
  const Vec grid = log_omega_grid(1e-3, 1e3, 100);
  const std::vector<Vec> p_grid = {p1(0.5), p1(0.9), p1(1.5)};

  const ErrorReport report = hinf_linf_estimate(fom, rom, p_grid, grid);
  REQUIRE(report.records.size() == 3);
  CHECK(report.n_omega == 100);

  double brute = 0.0;
  for (const Vec &p : p_grid)
  {
    for (Index i = 0; i < grid.size(); i++)
    {
      brute = std::max(brute, error_sigma(fom, rom, grid[i], p));
    }
  }
  CHECK(report.hinf_linf >= brute); // polish only adds
  CHECK(report.hinf_linf == doctest::Approx(brute).epsilon(1e-4));

  double max_rec = 0.0;
  for (const HinfRecord &rec : report.records)
  {
    CHECK(rec.hinf <= report.hinf_linf);
    CHECK(rec.hinf == doctest::Approx(rec.p[0]).epsilon(1e-4));
    max_rec = std::max(max_rec, rec.hinf);
  }
  CHECK(report.hinf_linf == max_rec);

  // Parameter-independent model: every record agrees with the composite.
  const ScalarSource flat = first_order(0.0);
  const ErrorReport flat_report = hinf_linf_estimate(flat, rom, p_grid, grid);
  for (const HinfRecord &rec : flat_report.records)
  {
    CHECK(rec.hinf == flat_report.hinf_linf);
  }
}

TEST_CASE("feedthrough mismatch flags the energy norm as infinite")
{
  CMat one(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  const test::ConstSource fom(one, test::unit_domain());
  const ScalarSource rom = zero_source();
  const double h2 = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 5)},
                                   log_omega_grid(1e-3, 1e3, 50));
  CHECK(std::isinf(h2));
}

TEST_CASE("estimators validate their inputs")
{
  const ScalarSource fom = first_order();
  const ScalarSource rom = zero_source();

  CHECK_THROWS_AS((void)hinf_estimate(fom, rom, p1(0.5), Vec()), ParameterError);
  Vec unsorted(3);
  unsorted << 1.0, 3.0, 2.0;
  CHECK_THROWS_AS((void)hinf_estimate(fom, rom, p1(0.5), unsorted), ParameterError);
  Vec nonpositive(2);
  nonpositive << 0.0, 1.0;
  CHECK_THROWS_AS((void)hinf_estimate(fom, rom, p1(0.5), nonpositive), ParameterError);
  CHECK_THROWS_AS(
      (void)hinf_linf_estimate(fom, rom, {}, log_omega_grid(1e-1, 1e1, 5)),
      ParameterError);

  CMat wide(1, 2);
  wide.setZero();
  const test::ConstSource mismatched(wide, test::unit_domain());
  CHECK_THROWS_AS(
      (void)hinf_estimate(fom, mismatched, p1(0.5), log_omega_grid(1e-1, 1e1, 5)),
      DimensionError);
}

TEST_CASE("failed grid points are skipped until they dominate")
{
  const ScalarSource rom = zero_source();
  const Vec grid = log_omega_grid(1e-3, 1e3, 400);

  // Narrow failure band: a handful of the 400 points, well under 10%.
  const BandFailSource narrow(0.0, 0.1, test::unit_domain());
  const HinfEstimate est = hinf_estimate(narrow, rom, p1(0.5), grid);
  CHECK(est.skipped > 0);
  CHECK(est.skipped <= 10);
  CHECK(std::abs(est.value - 1.0) < 1e-6);

  // Half the axis failing is no longer trustworthy.
  const BandFailSource wide(0.0, 3.5, test::unit_domain());
  CHECK_THROWS_AS((void)hinf_estimate(wide, rom, p1(0.5), grid), EvaluationError);
}

TEST_CASE("estimates are identical across thread counts")
{
  const ScalarSource fom = first_order(0.7);
  const ScalarSource rom = zero_source();
  const Vec grid = log_omega_grid(1e-3, 1e3, 150);
  const std::vector<Vec> p_grid = {p1(0.5), p1(1.0), p1(1.5)};

  const ErrorReport r1 = hinf_linf_estimate(fom, rom, p_grid, grid, 1);
  const ErrorReport r3 = hinf_linf_estimate(fom, rom, p_grid, grid, 3);
  REQUIRE(r1.records.size() == r3.records.size());
  CHECK(r1.hinf_linf == r3.hinf_linf);
  for (size_t i = 0; i < r1.records.size(); i++)
  {
    CHECK(r1.records[i].hinf == r3.records[i].hinf);
    CHECK(r1.records[i].argmax_omega == r3.records[i].argmax_omega);
  }

  const double h2a = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 7)}, grid, 1);
  const double h2b = h2_l2_estimate(fom, rom, {uniform_axis(0, 1, 7)}, grid, 4);
  CHECK(h2a == h2b);
}
