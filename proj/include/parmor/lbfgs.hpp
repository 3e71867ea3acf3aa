// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_LBFGS_HPP
#define PARMOR_LBFGS_HPP

#include <functional>
#include <limits>
#include <vector>

#include "parmor/types.hpp"

namespace parmor {

struct MinimizeOptions {
  Index max_iters = 1000;
  double grad_tol = 1e-8; // on the max-norm of the gradient
  Index memory = 20;      // curvature pairs kept for the two-loop recursion
  // Early-out: stop as soon as the value drops to f_target or below. The
  // bisection sets this to half its acceptance threshold, so accepted levels
  // do not burn iterations polishing an already-sufficient minimum.
  double f_target = -std::numeric_limits<double>::infinity();
  double c1 = 1e-4; // sufficient-decrease constant
  double c2 = 0.9;  // curvature constant (strong Wolfe)
  Index max_line_search = 40;
};

enum class MinimizeStatus
{
  GradientTol,
  FTarget,
  MaxIters,
  LineSearchFailed
};

const char *minimize_status_name(MinimizeStatus status);

struct MinimizeResult {
  Vec theta;
  double value = 0.0;
  Vec gradient;
  Index iterations = 0;  // accepted quasi-Newton steps
  Index evaluations = 0; // objective/gradient evaluations
  MinimizeStatus status = MinimizeStatus::MaxIters;
  std::vector<double> history; // accepted values, starting with f(theta0)
};

// Objective and gradient evaluated together; returns the value and writes the
// gradient (resized as needed).
using ValueAndGradient = std::function<double(const Vec &, Vec &)>;

// Limited-memory BFGS with a strong-Wolfe line search. Returns the best
// (lowest) iterate seen. Throws OptimizationError when the objective or
// gradient turns non-finite.
MinimizeResult minimize(const ValueAndGradient &fg, const Vec &theta0,
                        const MinimizeOptions &opts = {});

// Convenience overload for separate value and gradient callbacks.
MinimizeResult minimize(const std::function<double(const Vec &)> &f,
                        const std::function<Vec(const Vec &)> &g, const Vec &theta0,
                        const MinimizeOptions &opts = {});

} // namespace parmor

#endif // PARMOR_LBFGS_HPP
