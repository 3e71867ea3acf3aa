// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "parmor/metrics.hpp"
#include "parmor/sampling.hpp"
#include "parmor/sobmor.hpp"
#include "parmor/types.hpp"

namespace parmor {

std::string fmt_float(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

void atomic_write_file(const std::string &path, const std::string &content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw IngestionError("cannot open '" + tmp + "' for writing");
    }
    out << content;
    out.flush();
    if (!out)
    {
      throw IngestionError("failed while writing '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
  {
    std::remove(tmp.c_str());
    throw IngestionError("cannot move temporary file onto '" + path + "'");
  }
}

void write_trace_csv(const BisectionTrace &trace, const std::string &path)
{
  std::ostringstream out;
  out << "iter,gamma,alpha,accepted,n_samples,inner_iters,wall_ms\n";
  for (size_t i = 0; i < trace.iterations.size(); i++)
  {
    const BisectionIteration &it = trace.iterations[i];
    out << i << "," << fmt_float(it.gamma) << "," << fmt_float(it.alpha) << ","
        << (it.accepted ? 1 : 0) << "," << it.n_samples << "," << it.inner_iters
        << "," << fmt_float(it.wall_ms) << "\n";
  }
  atomic_write_file(path, out.str());
}

void write_grid_csv(const SampleGrid &grid, const std::string &path)
{
  std::ostringstream out;
  out << "[vertices]\n";
  out << "index,omega";
  for (Index ax = 0; ax < grid.n_p; ax++)
  {
    out << ",p_" << ax;
  }
  out << ",phi\n";
  for (Index v = 0; v < grid.n_vertices(); v++)
  {
    const SamplePoint sp = grid.to_sample(v);
    out << v << "," << fmt_float(sp.omega);
    for (Index ax = 0; ax < grid.n_p; ax++)
    {
      out << "," << fmt_float(sp.p[ax]);
    }
    out << "," << fmt_float(grid.phi[static_cast<size_t>(v)]) << "\n";
  }
  out << "[edges]\n";
  out << "v0,v1,axis\n";
  for (const SampleGrid::Edge &e : grid.edges)
  {
    out << e.v0 << "," << e.v1 << "," << e.axis << "\n";
  }
  atomic_write_file(path, out.str());
}

void write_error_report_csv(const ErrorReport &report, const std::string &path)
{
  const Index n_p = report.records.empty() ? 0 : report.records.front().p.size();
  std::ostringstream out;
  out << "tag";
  for (Index ax = 0; ax < n_p; ax++)
  {
    out << ",p_" << ax;
  }
  out << ",hinf,argmax_omega\n";
  for (const HinfRecord &rec : report.records)
  {
    out << "point";
    for (Index ax = 0; ax < n_p; ax++)
    {
      out << "," << fmt_float(rec.p[ax]);
    }
    out << "," << fmt_float(rec.hinf) << "," << fmt_float(rec.argmax_omega) << "\n";
  }
  out << "composite";
  for (Index ax = 0; ax < n_p; ax++)
  {
    out << ",";
  }
  out << "," << fmt_float(report.hinf_linf) << ",\n";
  if (report.h2_l2.has_value())
  {
    out << "h2_l2";
    for (Index ax = 0; ax < n_p; ax++)
    {
      out << ",";
    }
    out << "," << fmt_float(*report.h2_l2) << ",\n";
  }
  atomic_write_file(path, out.str());
}

} // namespace parmor
