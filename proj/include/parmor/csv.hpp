// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_CSV_HPP
#define PARMOR_CSV_HPP

#include <string>

namespace parmor {

struct BisectionTrace;
struct SampleGrid;
struct ErrorReport;

// %.16e (17 significant digits): double -> text -> double is lossless, and
// the fixed exponent form keeps artifacts byte-stable across reruns.
std::string fmt_float(double x);

// Write content to path via a sibling temp file + rename, so readers never
// observe a half-written artifact. Throws IngestionError on I/O failure.
void atomic_write_file(const std::string &path, const std::string &content);

// CSV artifacts. All writers emit a header row, '.' decimals, ',' separators
// and LF line endings, and write atomically.
void write_trace_csv(const BisectionTrace &trace, const std::string &path);
void write_grid_csv(const SampleGrid &grid, const std::string &path);
void write_error_report_csv(const ErrorReport &report, const std::string &path);

} // namespace parmor

#endif // PARMOR_CSV_HPP
