// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_SAMPLING_HPP
#define PARMOR_SAMPLING_HPP

#include <functional>
#include <vector>

#include "parmor/objective.hpp"
#include "parmor/types.hpp"

namespace parmor {

// Scalar field over the joint frequency x parameter domain, typically the
// largest singular value of the pointwise error transfer function.
using ScalarField = std::function<double(const SamplePoint &)>;

// Adaptive grid over (omega, p). Internally every vertex lives in scaled
// coordinates: axis 0 is log10(omega) (frequency ranges span decades), axes
// 1..n_p are the parameter coordinates unchanged. Edge lengths and difference
// quotients are measured in these coordinates.
struct SampleGrid {
  struct Edge {
    Index v0 = 0;
    Index v1 = 0;
    int axis = 0;
  };

  Index n_p = 0;          // parameter axes; the full dimension is n_p + 1
  Vec scale_lo, scale_hi; // per-axis bounds of the scaled box
  std::vector<Vec> vertices;
  std::vector<double> phi; // cached field value per vertex (NaN = unknown)
  std::vector<Edge> edges; // axis-aligned, in insertion order
  bool budget_hit = false; // refinement stopped early at the vertex budget

  Index dim() const { return n_p + 1; }
  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_edges() const { return static_cast<Index>(edges.size()); }

  // Unscaled view of a vertex: omega = 10^z0, p = (z1, ..., z_np).
  SamplePoint to_sample(Index v) const;
  std::vector<SamplePoint> samples() const;
};

// Tensor-product start grid: log-spaced in omega, linear in every parameter
// axis, with the full set of axis-aligned nearest-neighbor edges. Field
// values start out unknown.
SampleGrid initial_grid(double omega_lo, double omega_hi, const Box &domain,
                        Index omega_count, const std::vector<Index> &p_counts);

// Split decision for one edge of scaled length h > 0, given the field at the
// endpoints and at the midpoint probe. The steeper one-sided difference
// quotient magnitude stands in for the Lipschitz constant of the field on the
// edge; the edge splits when the resulting linear tent could exceed the level
// gamma above the larger endpoint:
//   max(|d1|, |d2|) * h >= 2 (gamma + gamma*) - phi1 - phi2,
// with d1 = (phi_test - phi1)/(h/2), d2 = (phi2 - phi_test)/(h/2) and
// gamma* = max(phi1, phi2). Magnitudes matter: a signed maximum would certify
// any steeply falling edge untested and hide a peak on its flank.
bool edge_needs_split(double phi1, double phi2, double phi_test, double h, double gamma);

struct RefineOptions {
  Index vertex_budget = 20000;
  int threads = 1;
  // Edges at or below twice this fraction of the axis extent refuse to split,
  // so a genuine discontinuity cannot recurse forever.
  double h_min_factor = 1e-6;
};

// Fill in the cached field value of every vertex (all of them, so stale
// values from an earlier field cannot linger).
void evaluate_field(SampleGrid &grid, const ScalarField &field, int threads = 1);

// Recursive edge refinement to a fixed point: probe each edge's midpoint,
// split where edge_needs_split fires, connect every inserted vertex to its
// nearest axis neighbors (removing any edge the new vertex lands on), and
// sweep again until nothing is added. Field values are (re-)evaluated for the
// current field. If the vertex budget is hit the partially refined grid is
// returned with budget_hit set.
SampleGrid refine(SampleGrid grid, const ScalarField &field, double gamma,
                  const RefineOptions &opts = {});

// First-order certificate for one hyperrectangular cell: given the field at
// all 2^l corners, per-axis derivative bounds L and side lengths dz, returns
// true when sum_j L_j dz_j < 2 gamma* + 2 tau - 2 mean(corner values), which
// guarantees phi < gamma* + tau throughout the cell (gamma* = max corner
// value). Diagnostic only; refinement does not rely on it.
bool cell_certificate(const std::vector<double> &corner_phi, const Vec &L, const Vec &dz,
                      double tau);

} // namespace parmor

#endif // PARMOR_SAMPLING_HPP
