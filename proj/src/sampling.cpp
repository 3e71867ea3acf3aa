// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "parmor/log.hpp"
#include "parmor/parallel.hpp"

namespace parmor {

namespace {

using QuantKey = std::vector<long long>;

// Combinatorial index over a grid: vertex dedup keys, per-axis lines ordered
// by coordinate, and the live edge set. Rebuilt at the start of every refine
// call; quantisation is relative so it is stable under midpoint arithmetic.
class GridIndex
{
public:
  explicit GridIndex(SampleGrid &grid) : grid_(grid)
  {
    const Index dim = grid.dim();
    if (grid.scale_lo.size() != dim || grid.scale_hi.size() != dim)
    {
      throw StructureError("sample grid bounds do not match its dimension");
    }
    quantum_.resize(dim);
    for (Index ax = 0; ax < dim; ax++)
    {
      const double extent = grid.scale_hi[ax] - grid.scale_lo[ax];
      if (!(extent > 0.0))
      {
        throw StructureError("sample grid has a degenerate axis");
      }
      quantum_[ax] = 1e-9 * extent;
    }
    lines_.resize(static_cast<size_t>(dim));
    for (Index v = 0; v < grid.n_vertices(); v++)
    {
      if (grid.vertices[static_cast<size_t>(v)].size() != dim)
      {
        throw StructureError("sample grid vertex has wrong dimension");
      }
      register_vertex(v);
    }
    for (Index e = 0; e < grid.n_edges(); e++)
    {
      const SampleGrid::Edge &edge = grid.edges[static_cast<size_t>(e)];
      if (edge.v0 < 0 || edge.v0 >= grid.n_vertices() || edge.v1 < 0 ||
          edge.v1 >= grid.n_vertices() || edge.axis < 0 || edge.axis >= dim)
      {
        throw StructureError("sample grid edge is out of range");
      }
      edge_pos_[normalized(edge.v0, edge.v1)] = e;
    }
  }

  QuantKey key_of(const Vec &z) const
  {
    const Index dim = grid_.dim();
    QuantKey key(static_cast<size_t>(dim));
    for (Index ax = 0; ax < dim; ax++)
    {
      key[static_cast<size_t>(ax)] =
          std::llround((z[ax] - grid_.scale_lo[ax]) / quantum_[ax]);
    }
    return key;
  }

  Index find_vertex(const QuantKey &key) const
  {
    const auto it = dedup_.find(key);
    return it == dedup_.end() ? Index{-1} : it->second;
  }

  bool edge_alive(Index v0, Index v1) const
  {
    return edge_pos_.count(normalized(v0, v1)) > 0;
  }

  // Inserts a vertex with the given field value and connects it to its
  // nearest neighbour in each direction along every axis. An edge that the
  // new vertex lands on is replaced by its two halves. Returns the vertex
  // index (the existing one if the position is already occupied).
  Index insert_vertex(const Vec &z, double value)
  {
    const QuantKey key = key_of(z);
    const Index existing = find_vertex(key);
    if (existing >= 0)
    {
      return existing;
    }
    const Index v = grid_.n_vertices();
    grid_.vertices.push_back(z);
    grid_.phi.push_back(value);
    register_vertex(v);

    const Index dim = grid_.dim();
    for (Index ax = 0; ax < dim; ax++)
    {
      const auto &line = lines_[static_cast<size_t>(ax)].at(line_key(key, ax));
      const auto here = line.find(z[ax]);
      Index pred = -1, succ = -1;
      if (here != line.begin())
      {
        pred = std::prev(here)->second;
      }
      if (std::next(here) != line.end())
      {
        succ = std::next(here)->second;
      }
      if (pred >= 0 && succ >= 0 && edge_alive(pred, succ))
      {
        remove_edge(pred, succ);
      }
      if (pred >= 0 && !edge_alive(pred, v))
      {
        add_edge(pred, v, static_cast<int>(ax));
      }
      if (succ >= 0 && !edge_alive(v, succ))
      {
        add_edge(v, succ, static_cast<int>(ax));
      }
    }
    return v;
  }

  // Drop tombstoned edges, preserving insertion order.
  void compact()
  {
    std::vector<SampleGrid::Edge> live;
    live.reserve(grid_.edges.size());
    for (const SampleGrid::Edge &e : grid_.edges)
    {
      if (e.axis >= 0)
      {
        live.push_back(e);
      }
    }
    grid_.edges = std::move(live);
  }

private:
  static std::pair<Index, Index> normalized(Index a, Index b)
  {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  static QuantKey line_key(const QuantKey &key, Index axis)
  {
    QuantKey off;
    off.reserve(key.size() - 1);
    for (size_t i = 0; i < key.size(); i++)
    {
      if (i != static_cast<size_t>(axis))
      {
        off.push_back(key[i]);
      }
    }
    return off;
  }

  void register_vertex(Index v)
  {
    const Vec &z = grid_.vertices[static_cast<size_t>(v)];
    const QuantKey key = key_of(z);
    if (!dedup_.emplace(key, v).second)
    {
      throw StructureError("sample grid contains duplicate vertices");
    }
    for (Index ax = 0; ax < grid_.dim(); ax++)
    {
      lines_[static_cast<size_t>(ax)][line_key(key, ax)].emplace(z[ax], v);
    }
  }

  void add_edge(Index v0, Index v1, int axis)
  {
    edge_pos_[normalized(v0, v1)] = grid_.n_edges();
    grid_.edges.push_back({v0, v1, axis});
  }

  void remove_edge(Index v0, Index v1)
  {
    const auto it = edge_pos_.find(normalized(v0, v1));
    grid_.edges[static_cast<size_t>(it->second)].axis = -1;
    edge_pos_.erase(it);
  }

  SampleGrid &grid_;
  std::vector<double> quantum_;
  std::map<QuantKey, Index> dedup_;
  std::vector<std::map<QuantKey, std::map<double, Index>>> lines_;
  std::map<std::pair<Index, Index>, Index> edge_pos_;
};

SamplePoint sample_at(const SampleGrid &grid, const Vec &z)
{
  SamplePoint sp;
  sp.omega = std::pow(10.0, z[0]);
  sp.p = z.tail(grid.n_p);
  return sp;
}

} // namespace

SamplePoint SampleGrid::to_sample(Index v) const
{
  return sample_at(*this, vertices.at(static_cast<size_t>(v)));
}

std::vector<SamplePoint> SampleGrid::samples() const
{
  std::vector<SamplePoint> out;
  out.reserve(vertices.size());
  for (Index v = 0; v < n_vertices(); v++)
  {
    out.push_back(to_sample(v));
  }
  return out;
}

SampleGrid initial_grid(double omega_lo, double omega_hi, const Box &domain,
                        Index omega_count, const std::vector<Index> &p_counts)
{
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
  {
    throw ParameterError("frequency band must satisfy 0 < lo < hi");
  }
  if (omega_count < 2)
  {
    throw ParameterError("need at least two frequency grid points");
  }
  if (domain.lo.size() != domain.hi.size() ||
      static_cast<size_t>(domain.lo.size()) != p_counts.size())
  {
    throw ParameterError("parameter grid counts do not match the domain");
  }
  const Index n_p = domain.lo.size();
  for (Index i = 0; i < n_p; i++)
  {
    if (!(domain.hi[i] > domain.lo[i]))
    {
      throw ParameterError("parameter domain has an empty axis");
    }
    if (p_counts[static_cast<size_t>(i)] < 2)
    {
      throw ParameterError("need at least two grid points per parameter axis");
    }
  }

  SampleGrid grid;
  grid.n_p = n_p;
  const Index dim = n_p + 1;
  grid.scale_lo = Vec(dim);
  grid.scale_hi = Vec(dim);
  grid.scale_lo[0] = std::log10(omega_lo);
  grid.scale_hi[0] = std::log10(omega_hi);
  grid.scale_lo.tail(n_p) = domain.lo;
  grid.scale_hi.tail(n_p) = domain.hi;

  std::vector<Index> counts(static_cast<size_t>(dim));
  counts[0] = omega_count;
  for (Index i = 0; i < n_p; i++)
  {
    counts[static_cast<size_t>(i + 1)] = p_counts[static_cast<size_t>(i)];
  }

  // Tensor grid with the last axis fastest; axis-aligned nearest-neighbour
  // edges via index strides.
  std::vector<Index> stride(static_cast<size_t>(dim));
  Index total = 1;
  for (Index ax = dim - 1; ax >= 0; ax--)
  {
    stride[static_cast<size_t>(ax)] = total;
    total *= counts[static_cast<size_t>(ax)];
  }

  std::vector<Index> idx(static_cast<size_t>(dim), 0);
  for (Index v = 0; v < total; v++)
  {
    Vec z(dim);
    for (Index ax = 0; ax < dim; ax++)
    {
      const Index c = counts[static_cast<size_t>(ax)];
      const double t = static_cast<double>(idx[static_cast<size_t>(ax)]) /
                       static_cast<double>(c - 1);
      z[ax] = grid.scale_lo[ax] + t * (grid.scale_hi[ax] - grid.scale_lo[ax]);
    }
    grid.vertices.push_back(z);
    grid.phi.push_back(std::numeric_limits<double>::quiet_NaN());
    for (Index ax = 0; ax < dim; ax++)
    {
      if (idx[static_cast<size_t>(ax)] + 1 < counts[static_cast<size_t>(ax)])
      {
        grid.edges.push_back(
            {v, v + stride[static_cast<size_t>(ax)], static_cast<int>(ax)});
      }
    }
    for (Index ax = dim - 1; ax >= 0; ax--)
    {
      if (++idx[static_cast<size_t>(ax)] < counts[static_cast<size_t>(ax)])
      {
        break;
      }
      idx[static_cast<size_t>(ax)] = 0;
    }
  }
  return grid;
}

bool edge_needs_split(double phi1, double phi2, double phi_test, double h,
                      double gamma)
{
  if (!(h > 0.0))
  {
    throw StructureError("edge length must be positive");
  }
  const double d1 = std::abs(phi_test - phi1) / (h / 2.0);
  const double d2 = std::abs(phi2 - phi_test) / (h / 2.0);
  const double gamma_star = std::max(phi1, phi2);
  return std::max(d1, d2) * h >= 2.0 * (gamma + gamma_star) - phi1 - phi2;
}

void evaluate_field(SampleGrid &grid, const ScalarField &field, int threads)
{
  const Index n = grid.n_vertices();
  std::vector<double> values(static_cast<size_t>(n));
  parallel_indexed(n, threads, [&](Index v) {
    values[static_cast<size_t>(v)] = field(grid.to_sample(v));
  });
  grid.phi.assign(values.begin(), values.end());
}

bool cell_certificate(const std::vector<double> &corner_phi, const Vec &L,
                      const Vec &dz, double tau)
{
  const Index dim = L.size();
  if (dz.size() != dim)
  {
    throw StructureError("derivative bound and cell extents disagree");
  }
  if (corner_phi.size() != (size_t{1} << static_cast<size_t>(dim)))
  {
    throw StructureError("a cell needs 2^dim corner values");
  }
  double gamma_star = corner_phi[0];
  double sum = 0.0;
  for (double v : corner_phi)
  {
    gamma_star = std::max(gamma_star, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(corner_phi.size());
  return L.dot(dz) < 2.0 * gamma_star + 2.0 * tau - 2.0 * mean;
}

SampleGrid refine(SampleGrid grid, const ScalarField &field, double gamma,
                  const RefineOptions &opts)
{
  if (!(gamma > 0.0))
  {
    throw ParameterError("refinement level gamma must be positive");
  }
  grid.budget_hit = false;
  evaluate_field(grid, field, opts.threads);
  GridIndex index(grid);

  const Index dim = grid.dim();
  Vec h_min(dim);
  for (Index ax = 0; ax < dim; ax++)
  {
    h_min[ax] = opts.h_min_factor * (grid.scale_hi[ax] - grid.scale_lo[ax]);
  }

  // Midpoint values are cached for the duration of this call; the field is
  // a fixed function here, so a position never needs a second evaluation.
  std::map<QuantKey, double> probes;

  bool added = true;
  while (added && !grid.budget_hit)
  {
    added = false;
    const Index sweep_end = grid.n_edges();

    // Probe every live midpoint of this sweep up front (in parallel when
    // asked to); the mutation pass below is sequential and deterministic.
    std::vector<Index> pending;
    std::vector<Vec> midpoints;
    std::vector<QuantKey> keys;
    for (Index e = 0; e < sweep_end; e++)
    {
      const SampleGrid::Edge edge = grid.edges[static_cast<size_t>(e)];
      if (edge.axis < 0)
      {
        continue;
      }
      Vec zm = grid.vertices[static_cast<size_t>(edge.v0)];
      zm[edge.axis] =
          0.5 * (zm[edge.axis] + grid.vertices[static_cast<size_t>(edge.v1)][edge.axis]);
      QuantKey key = index.key_of(zm);
      if (probes.count(key) > 0 || index.find_vertex(key) >= 0)
      {
        continue;
      }
      bool queued = false;
      for (const QuantKey &k : keys)
      {
        if (k == key)
        {
          queued = true;
          break;
        }
      }
      if (queued)
      {
        continue;
      }
      pending.push_back(e);
      midpoints.push_back(std::move(zm));
      keys.push_back(std::move(key));
    }
    std::vector<double> values(pending.size());
    parallel_indexed(static_cast<Index>(pending.size()), opts.threads, [&](Index i) {
      values[static_cast<size_t>(i)] = field(sample_at(grid, midpoints[static_cast<size_t>(i)]));
    });
    for (size_t i = 0; i < pending.size(); i++)
    {
      probes.emplace(keys[i], values[i]);
    }

    for (Index e = 0; e < sweep_end && !grid.budget_hit; e++)
    {
      const SampleGrid::Edge edge = grid.edges[static_cast<size_t>(e)];
      if (edge.axis < 0)
      {
        continue; // removed earlier in this sweep
      }
      const Vec &za = grid.vertices[static_cast<size_t>(edge.v0)];
      const Vec &zb = grid.vertices[static_cast<size_t>(edge.v1)];
      const double h = std::abs(zb[edge.axis] - za[edge.axis]);
      if (h < 2.0 * h_min[edge.axis])
      {
        log::debug("refine: edge below minimum spacing, not split");
        continue;
      }
      Vec zm = za;
      zm[edge.axis] = 0.5 * (za[edge.axis] + zb[edge.axis]);

      const QuantKey key = index.key_of(zm);
      double phi_test;
      const Index occupied = index.find_vertex(key);
      if (occupied >= 0)
      {
        phi_test = grid.phi[static_cast<size_t>(occupied)];
      }
      else
      {
        const auto hit = probes.find(key);
        phi_test = hit != probes.end() ? hit->second
                                       : probes.emplace(key, field(sample_at(grid, zm)))
                                             .first->second;
      }

      // Orient the endpoints by coordinate: the quotients are one-sided
      // slopes from the lower endpoint up and to the upper endpoint.
      const bool forward = za[edge.axis] < zb[edge.axis];
      const double phi1 = grid.phi[static_cast<size_t>(forward ? edge.v0 : edge.v1)];
      const double phi2 = grid.phi[static_cast<size_t>(forward ? edge.v1 : edge.v0)];
      if (!edge_needs_split(phi1, phi2, phi_test, h, gamma))
      {
        continue;
      }
      if (grid.n_vertices() >= opts.vertex_budget)
      {
        grid.budget_hit = true;
        log::info("refine: vertex budget reached, grid left partially refined");
        break;
      }
      index.insert_vertex(zm, phi_test);
      added = true;
    }
  }

  index.compact();
  return grid;
}

} // namespace parmor
