// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/reshape.hpp"

#include <string>

namespace parmor {

namespace {

void check_length(const char *op, Index got, Index want)
{
  if (got != want)
  {
    throw DimensionError(std::string(op) + ": vector has length " +
                         std::to_string(got) + ", expected " + std::to_string(want));
  }
}

void check_square(const char *op, const Mat &M)
{
  if (M.rows() != M.cols())
  {
    throw DimensionError(std::string(op) + ": matrix is " + std::to_string(M.rows()) +
                         "x" + std::to_string(M.cols()) + ", expected square");
  }
}

} // namespace

Mat vtf(const Vec &v, Index n, Index m)
{
  check_length("vtf", v.size(), n * m);
  // Eigen matrices are column-major by default, so this is exactly vec^{-1}.
  return Eigen::Map<const Mat>(v.data(), n, m);
}

Vec ftv(const Mat &M)
{
  return Eigen::Map<const Vec>(M.data(), M.size());
}

Mat vtu(const Vec &v, Index n)
{
  check_length("vtu", v.size(), tri_len(n));
  Mat M = Mat::Zero(n, n);
  Index k = 0;
  for (Index i = 0; i < n; i++)
  {
    for (Index j = i; j < n; j++)
    {
      M(i, j) = v[k++];
    }
  }
  return M;
}

Vec utv(const Mat &M)
{
  check_square("utv", M);
  const Index n = M.rows();
  Vec v(tri_len(n));
  Index k = 0;
  for (Index i = 0; i < n; i++)
  {
    for (Index j = i; j < n; j++)
    {
      v[k++] = M(i, j);
    }
  }
  return v;
}

Mat vtsu(const Vec &v, Index n)
{
  check_length("vtsu", v.size(), strict_tri_len(n));
  Mat M = Mat::Zero(n, n);
  Index k = 0;
  for (Index i = 0; i < n; i++)
  {
    for (Index j = i + 1; j < n; j++)
    {
      M(i, j) = v[k++];
    }
  }
  return M;
}

Vec sutv(const Mat &M)
{
  check_square("sutv", M);
  const Index n = M.rows();
  Vec v(strict_tri_len(n));
  Index k = 0;
  for (Index i = 0; i < n; i++)
  {
    for (Index j = i + 1; j < n; j++)
    {
      v[k++] = M(i, j);
    }
  }
  return v;
}

} // namespace parmor
