// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_OBJECTIVE_HPP
#define PARMOR_OBJECTIVE_HPP

#include <vector>

#include "parmor/fom.hpp"
#include "parmor/rom.hpp"
#include "parmor/types.hpp"

namespace parmor {

// One evaluation site in the joint frequency x parameter domain.
struct SamplePoint {
  double omega = 0.0;
  Vec p;
};

// Value of the gamma-thresholded loss together with the per-sample hinge
// residuals, so callers can see which samples carry weight.
struct LossBreakdown {
  double value = 0.0;
  // residuals[k][j] = max(sigma_j(H - H_r) - gamma, 0) at sample k.
  std::vector<Vec> residuals;
  // Samples with at least one positive residual.
  std::vector<Index> active;
  // Largest singular value seen over all samples.
  double max_sigma = 0.0;
};

// loss(theta) = (1/gamma) sum over samples and singular indices of
// ([sigma_j(H - H_r) - gamma]_+)^2. Zero exactly when every sampled singular
// value is at most gamma. Throws ParameterError for gamma <= 0 or empty S.
LossBreakdown loss(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                   double gamma, const std::vector<SamplePoint> &samples,
                   int threads = 1);

// Gradient with respect to theta of sigma_j(H(s0, p) - H_r(s0, p; theta)),
// assembled block-wise from one SVD of the difference and one LU of
// s0 I - A(p, theta). Requires sigma_j nonzero and simple; a repeated value
// within 1e-8 * sigma_1 triggers a degeneracy warning and the returned vector
// is one subgradient element.
Vec singular_gradient(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                      Complex s0, const Vec &p, Index j);

// Gradient of loss: (2/gamma) sum over active residuals of
// (sigma_j - gamma) * grad sigma_j. Inactive samples are skipped entirely.
Vec loss_gradient(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                  double gamma, const std::vector<SamplePoint> &samples,
                  int threads = 1);

// Loss value and gradient in one pass, sharing the per-sample factorization
// and SVD. Writes the gradient into grad (resized to n_theta) and returns the
// value. This is the inner-solver entry point.
double loss_value_and_gradient(const ParametricRom &rom, const Vec &theta,
                               const TransferSource &fom, double gamma,
                               const std::vector<SamplePoint> &samples, Vec &grad,
                               int threads = 1);

} // namespace parmor

#endif // PARMOR_OBJECTIVE_HPP
