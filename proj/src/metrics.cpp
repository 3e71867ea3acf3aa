// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parmor/log.hpp"
#include "parmor/parallel.hpp"

namespace parmor {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSkipFraction = 0.10;
constexpr double kProperProbeOmega = 1e12;
constexpr double kProperTol = 1e-8;
constexpr int kPolishIterations = 60; // three rounds of twenty golden steps

void check_omega_grid(const Vec &omega_grid)
{
  if (omega_grid.size() == 0)
  {
    throw ParameterError("frequency grid is empty");
  }
  for (Index i = 0; i < omega_grid.size(); i++)
  {
    if (!(omega_grid[i] > 0.0))
    {
      throw ParameterError("frequency grid entries must be positive");
    }
    if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
    {
      throw ParameterError("frequency grid must be strictly increasing");
    }
  }
}

void check_dims(const TransferSource &fom, const TransferSource &rom)
{
  if (fom.n_u() != rom.n_u() || fom.n_y() != rom.n_y())
  {
    throw DimensionError("models must share input and output dimensions");
  }
}

// sigma_max of the error at i*omega; NaN encodes a failed evaluation.
double try_error_sigma(const TransferSource &fom, const TransferSource &rom,
                       double omega, const Vec &p)
{
  try
  {
    return error_sigma(fom, rom, omega, p);
  }
  catch (const Error &)
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Trapezoid weights for arbitrary sorted nodes; a single node gets weight 1.
Vec trapezoid_weights(const Vec &nodes)
{
  const Index n = nodes.size();
  Vec w = Vec::Ones(n);
  if (n < 2)
  {
    return w;
  }
  w[0] = 0.5 * (nodes[1] - nodes[0]);
  w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
  for (Index i = 1; i + 1 < n; i++)
  {
    w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
  }
  return w;
}

} // namespace

Vec log_omega_grid(double lo, double hi, Index count)
{
  if (!(lo > 0.0) || !(hi > lo))
  {
    throw ParameterError("frequency band must satisfy 0 < lo < hi");
  }
  if (count < 2)
  {
    throw ParameterError("need at least two frequency grid points");
  }
  const double zlo = std::log10(lo);
  const double zhi = std::log10(hi);
  Vec grid(count);
  for (Index i = 0; i < count; i++)
  {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = std::pow(10.0, zlo + t * (zhi - zlo));
  }
  grid[0] = lo;
  grid[count - 1] = hi;
  return grid;
}

Vec default_omega_grid()
{
  return log_omega_grid(1e-3, 1e3, 400);
}

Vec uniform_axis(double lo, double hi, Index count)
{
  if (!(hi >= lo))
  {
    throw ParameterError("axis bounds are reversed");
  }
  if (count < 1 || (count > 1 && hi == lo))
  {
    throw ParameterError("degenerate axis needs exactly one node");
  }
  Vec axis(count);
  if (count == 1)
  {
    axis[0] = 0.5 * (lo + hi);
    return axis;
  }
  for (Index i = 0; i < count; i++)
  {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    axis[i] = lo + t * (hi - lo);
  }
  axis[count - 1] = hi;
  return axis;
}

std::vector<Vec> tensor_points(const std::vector<Vec> &axes)
{
  Index total = 1;
  for (const Vec &axis : axes)
  {
    if (axis.size() == 0)
    {
      throw ParameterError("tensor axis has no nodes");
    }
    total *= axis.size();
  }
  std::vector<Vec> points;
  points.reserve(static_cast<size_t>(total));
  const Index dim = static_cast<Index>(axes.size());
  std::vector<Index> idx(axes.size(), 0);
  for (Index k = 0; k < total; k++)
  {
    Vec p(dim);
    for (Index ax = 0; ax < dim; ax++)
    {
      p[ax] = axes[static_cast<size_t>(ax)][idx[static_cast<size_t>(ax)]];
    }
    points.push_back(std::move(p));
    for (Index ax = dim - 1; ax >= 0; ax--)
    {
      if (++idx[static_cast<size_t>(ax)] < axes[static_cast<size_t>(ax)].size())
      {
        break;
      }
      idx[static_cast<size_t>(ax)] = 0;
    }
  }
  return points;
}

HinfEstimate hinf_estimate(const TransferSource &fom, const TransferSource &rom,
                           const Vec &p, const Vec &omega_grid, int threads)
{
  check_omega_grid(omega_grid);
  check_dims(fom, rom);

  const Index n = omega_grid.size();
  std::vector<double> sigma(static_cast<size_t>(n));
  parallel_indexed(n, threads, [&](Index i) {
    sigma[static_cast<size_t>(i)] = try_error_sigma(fom, rom, omega_grid[i], p);
  });

  Index skipped = 0;
  Index best = -1;
  for (Index i = 0; i < n; i++)
  {
    const double v = sigma[static_cast<size_t>(i)];
    if (std::isnan(v))
    {
      skipped++;
      continue;
    }
    if (best < 0 || v > sigma[static_cast<size_t>(best)])
    {
      best = i;
    }
  }
  if (static_cast<double>(skipped) > kSkipFraction * static_cast<double>(n) || best < 0)
  {
    throw EvaluationError("too many failed evaluations for a trustworthy estimate");
  }

  HinfEstimate out;
  out.skipped = skipped;
  out.value = sigma[static_cast<size_t>(best)];
  out.argmax_omega = omega_grid[best];

  // Golden-section polish between the neighbours of the grid argmax, in the
  // log-frequency coordinate. Failed probes count as -inf: the grid value
  // already in hand keeps the estimate a lower bound.
  double a = std::log10(omega_grid[std::max<Index>(best - 1, 0)]);
  double b = std::log10(omega_grid[std::min<Index>(best + 1, n - 1)]);
  const auto probe = [&](double z) {
    const double v = try_error_sigma(fom, rom, std::pow(10.0, z), p);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = probe(c);
  double fd = probe(d);
  for (int it = 0; it < kPolishIterations; it++)
  {
    if (fc > fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = probe(c);
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = probe(d);
    }
    const double z = fc > fd ? c : d;
    const double v = fc > fd ? fc : fd;
    if (v > out.value)
    {
      out.value = v;
      out.argmax_omega = std::pow(10.0, z);
    }
  }
  return out;
}

ErrorReport hinf_linf_estimate(const TransferSource &fom, const TransferSource &rom,
                               const std::vector<Vec> &p_grid, const Vec &omega_grid,
                               int threads)
{
  if (p_grid.empty())
  {
    throw ParameterError("parameter grid is empty");
  }
  ErrorReport report;
  report.n_omega = omega_grid.size();
  for (const Vec &p : p_grid)
  {
    const HinfEstimate est = hinf_estimate(fom, rom, p, omega_grid, threads);
    report.records.push_back({p, est.value, est.argmax_omega});
    report.skipped += est.skipped;
    report.hinf_linf = std::max(report.hinf_linf, est.value);
  }
  return report;
}

double h2_l2_estimate(const TransferSource &fom, const TransferSource &rom,
                      const std::vector<Vec> &p_axes, const Vec &omega_grid,
                      int threads)
{
  check_omega_grid(omega_grid);
  check_dims(fom, rom);
  for (const Vec &axis : p_axes)
  {
    for (Index i = 1; i < axis.size(); i++)
    {
      if (!(axis[i] > axis[i - 1]))
      {
        throw ParameterError("parameter axis must be strictly increasing");
      }
    }
  }

  const std::vector<Vec> points = tensor_points(p_axes);
  const Index n_p = static_cast<Index>(points.size());
  const Index n_w = omega_grid.size();

  // Strict-properness probe: a feedthrough mismatch leaves the error flat as
  // omega grows, so the integral over the whole axis diverges.
  for (const Vec &p : points)
  {
    const double tail = try_error_sigma(fom, rom, kProperProbeOmega, p);
    if (std::isnan(tail))
    {
      continue; // counted against the skip budget below if persistent
    }
    if (tail > kProperTol)
    {
      log::info("h2_l2_estimate: error is not strictly proper, norm is infinite");
      return std::numeric_limits<double>::infinity();
    }
  }

  Vec w_omega = trapezoid_weights(omega_grid);
  Vec w_p = Vec::Ones(n_p);
  {
    std::vector<Vec> axis_weights;
    axis_weights.reserve(p_axes.size());
    for (const Vec &axis : p_axes)
    {
      axis_weights.push_back(trapezoid_weights(axis));
    }
    for (Index j = 0; j < n_p; j++)
    {
      Index rest = j;
      for (Index ax = static_cast<Index>(p_axes.size()) - 1; ax >= 0; ax--)
      {
        const Index count = p_axes[static_cast<size_t>(ax)].size();
        w_p[j] *= axis_weights[static_cast<size_t>(ax)][rest % count];
        rest /= count;
      }
    }
  }

  const Index total = n_w * n_p;
  std::vector<double> squared(static_cast<size_t>(total));
  parallel_indexed(total, threads, [&](Index k) {
    const Index iw = k / n_p;
    const Index jp = k % n_p;
    try
    {
      const CMat e = fom.eval(Complex(0.0, omega_grid[iw]), points[static_cast<size_t>(jp)]) -
                     rom.eval(Complex(0.0, omega_grid[iw]), points[static_cast<size_t>(jp)]);
      squared[static_cast<size_t>(k)] = e.squaredNorm();
    }
    catch (const Error &)
    {
      squared[static_cast<size_t>(k)] = std::numeric_limits<double>::quiet_NaN();
    }
  });

  Index skipped = 0;
  double integral = 0.0;
  for (Index k = 0; k < total; k++)
  {
    const double v = squared[static_cast<size_t>(k)];
    if (std::isnan(v))
    {
      skipped++;
      continue;
    }
    integral += w_omega[k / n_p] * w_p[k % n_p] * v;
  }
  if (static_cast<double>(skipped) > kSkipFraction * static_cast<double>(total))
  {
    throw EvaluationError("too many failed evaluations for a trustworthy estimate");
  }
  return std::sqrt(integral / kPi);
}

} // namespace parmor
