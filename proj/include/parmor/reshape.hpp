// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_RESHAPE_HPP
#define PARMOR_RESHAPE_HPP

#include "parmor/types.hpp"

namespace parmor {

// Vector <-> matrix reshaping maps. All six are linear and mutually inverse
// on their images. Conventions:
//   - vtf/ftv use column-major vectorization (vec),
//   - vtu/utv and vtsu/sutv fill/read the (strict) upper triangle row-wise.
// These layouts define how flat design-vector blocks become ROM matrix
// factors and how gradient matrices flatten back; changing them silently
// breaks every analytic gradient, so the tests pin them entry by entry.

// Length of the packed upper triangle of an n x n matrix, diagonal included.
constexpr Index tri_len(Index n)
{
  return n * (n + 1) / 2;
}

// Length of the packed strict upper triangle of an n x n matrix.
constexpr Index strict_tri_len(Index n)
{
  return n * (n - 1) / 2;
}

// v (length n*m) -> n x m matrix, column k <- v[(k-1)n .. kn-1].
Mat vtf(const Vec &v, Index n, Index m);

// n x m matrix -> vector of length n*m, column-major (inverse of vtf).
Vec ftv(const Mat &M);

// v (length n(n+1)/2) -> n x n upper-triangular matrix, rows filled
// left-to-right starting at the diagonal; strictly-lower part is zero.
Mat vtu(const Vec &v, Index n);

// n x n matrix -> packed upper triangle (row-wise); strictly-lower entries
// are ignored, so utv(vtu(v)) == v for any v.
Vec utv(const Mat &M);

// v (length n(n-1)/2) -> n x n strictly-upper-triangular matrix (row-wise).
Mat vtsu(const Vec &v, Index n);

// n x n matrix -> packed strict upper triangle (row-wise); inverse of vtsu.
Vec sutv(const Mat &M);

} // namespace parmor

#endif // PARMOR_RESHAPE_HPP
