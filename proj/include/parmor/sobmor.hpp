// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_SOBMOR_HPP
#define PARMOR_SOBMOR_HPP

#include <vector>

#include "parmor/fom.hpp"
#include "parmor/lbfgs.hpp"
#include "parmor/rom.hpp"
#include "parmor/sampling.hpp"
#include "parmor/types.hpp"

namespace parmor {

struct SobmorOptions {
  // Upper bound for the bisection; <= 0 picks 1.1 x the largest worst-case
  // gain of the full model over the initial sample set.
  double gamma_u = 0.0;
  double eps1 = 1e-2; // relative gap at which the bisection stops
  double eps2 = 1e-6; // loss level that counts as "gamma is achievable"
  // Inner iteration cap per gamma; <= 0 picks min(10 n_theta, 5000).
  Index inner_budget = 0;
  double grad_tol = 1e-8;
  Index memory = 20;
  Index vertex_budget = 20000;
  int threads = 1;
  // Wall-clock values stay 0.0 unless enabled, keeping traces byte-stable.
  bool timing = false;
  // Fresh-start attempts per rejecting level: when the warm-started inner
  // minimization misses eps2, retry from deterministic unit-scale draws and
  // keep the best attempt. Rescues iterates stuck in a poor local basin
  // without disturbing levels the warm start already wins. Zero disables.
  Index restarts = 1;
  uint64_t restart_seed = 0x9e3779b9u;
};

struct BisectionIteration {
  double gamma = 0.0;
  double alpha = 0.0; // achieved minimum loss at this gamma
  Index n_samples = 0;
  bool accepted = false;
  Index inner_iters = 0;
  double wall_ms = 0.0;
};

struct BisectionTrace {
  std::vector<BisectionIteration> iterations;
  double gamma_u = 0.0;
  double gamma_l = 0.0;
  Vec theta_fin;
  SampleGrid grid; // final adaptively refined sample grid
  // No gamma was ever accepted: the initial upper bound was not actually an
  // upper bound for what the optimizer could reach. Raise gamma_u and rerun.
  bool bracket_failure = false;
  bool sampling_budget_hit = false;
  // True when theta_fin's loss at gamma_u was re-validated against the final
  // grid (acceptances are certified against the grid as it stood at their
  // level; later levels keep refining it). False after a bracket failure, or
  // in the rare case where refinement at gamma_u uncovered error peaks the
  // optimizer could not pull back under the level.
  bool gamma_u_certified = false;
};

// Bisection over the error level gamma: each step refines the sample set at
// the current level, minimizes the hinge loss warm-started from the previous
// iterate (retrying from fresh draws when the warm attempt misses, see
// SobmorOptions::restarts), and moves whichever bracket end the outcome
// determines. The rom's stored parameter vector is left at theta_fin on
// return.
BisectionTrace sobmor(const TransferSource &fom, ParametricRom &rom, const Vec &theta0,
                      const SampleGrid &initial, const SobmorOptions &opts = {});

} // namespace parmor

#endif // PARMOR_SOBMOR_HPP
