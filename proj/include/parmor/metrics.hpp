// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_METRICS_HPP
#define PARMOR_METRICS_HPP

#include <optional>
#include <vector>

#include "parmor/fom.hpp"
#include "parmor/types.hpp"

namespace parmor {

// Worst-case error over frequency at a single parameter point, together with
// the frequency attaining it. Grid estimates are lower bounds by
// construction; `skipped` counts grid points whose evaluation failed.
struct HinfEstimate {
  double value = 0.0;
  double argmax_omega = 0.0;
  Index skipped = 0;
};

struct HinfRecord {
  Vec p;
  double hinf = 0.0;
  double argmax_omega = 0.0;
};

// Per-parameter worst-case errors plus the composite maximum over the
// parameter grid; optionally the energy-norm estimate over band x domain.
struct ErrorReport {
  std::vector<HinfRecord> records;
  double hinf_linf = 0.0;
  std::optional<double> h2_l2;
  Index n_omega = 0; // frequency grid size the records were computed on
  Index skipped = 0; // failed evaluations across all records
};

// count log-spaced frequencies covering [lo, hi], endpoints included.
Vec log_omega_grid(double lo, double hi, Index count);

// Library default: 400 points across the six decades [1e-3, 1e3].
Vec default_omega_grid();

// count uniformly spaced nodes on [lo, hi], endpoints included.
Vec uniform_axis(double lo, double hi, Index count);

// Flattened tensor product of per-axis node vectors (first axis slowest).
// No axes yields the single empty point.
std::vector<Vec> tensor_points(const std::vector<Vec> &axes);

// max over the grid of sigma_max(H - H_r) at parameter p, polished by a
// golden-section search between the argmax's neighbouring grid points (in
// log-frequency). Points whose evaluation throws are skipped and counted;
// more than 10% skips aborts the estimate.
HinfEstimate hinf_estimate(const TransferSource &fom, const TransferSource &rom,
                           const Vec &p, const Vec &omega_grid, int threads = 1);

// Composite worst case over a list of parameter points: the maximum of the
// per-point estimates, with every per-point record retained.
ErrorReport hinf_linf_estimate(const TransferSource &fom, const TransferSource &rom,
                               const std::vector<Vec> &p_grid, const Vec &omega_grid,
                               int threads = 1);

// Energy-norm estimate sqrt((1/pi) sum_omega sum_p w |e|_F^2) by trapezoidal
// quadrature over the frequency grid (negative frequencies folded in by
// conjugate symmetry) and tensor-trapezoid over the parameter axes. An axis
// with a single node integrates as a point evaluation with unit weight.
// Returns +inf when the error fails a strict-properness probe (non-matching
// feedthrough terms make the integral diverge).
double h2_l2_estimate(const TransferSource &fom, const TransferSource &rom,
                      const std::vector<Vec> &p_axes, const Vec &omega_grid,
                      int threads = 1);

} // namespace parmor

#endif // PARMOR_METRICS_HPP
