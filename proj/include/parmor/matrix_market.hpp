// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_MATRIX_MARKET_HPP
#define PARMOR_MATRIX_MARKET_HPP

#include <string>

#include "parmor/fom.hpp"
#include "parmor/types.hpp"

namespace parmor {

// Reads a Matrix Market file: coordinate or array format, real field,
// general or symmetric symmetry (symmetric entries are mirrored). Throws
// IngestionError naming the file and line on malformed input.
SpMat read_matrix_market(const std::string &path);

// Writes coordinate/real/general with 17-significant-digit entries, so a
// write -> read round trip reproduces every double bit-exactly. The write is
// atomic (temp file + rename).
void write_matrix_market(const SpMat &M, const std::string &path);

// Model manifest: an INI document declaring dimensions, the parameter box,
// and one [term] section per coefficient term,
//
//   [model]            [domain]         [term]
//   n_x = 100          lo = 0.5         family = A
//   n_u = 1            hi = 1.5         file = A0.mtx
//   n_y = 1                             function = const 1
//
// with file paths relative to the manifest location. Families E and D are
// optional (identity / zero). Dimension cross-checks run at load time.
ParamSeparableLTI load_model_manifest(const std::string &manifest_path);

// Writes <dir>/<name> plus one .mtx file per term (A0.mtx, A1.mtx, B0.mtx,
// ...). Loading the result reproduces the model exactly; user-kind scalar
// functions are not serializable and raise StructureError.
void save_model_manifest(const ParamSeparableLTI &model, const std::string &dir,
                         const std::string &manifest_name = "model.ini");

} // namespace parmor

#endif // PARMOR_MATRIX_MARKET_HPP
