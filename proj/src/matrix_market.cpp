// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "parmor/csv.hpp"
#include "parmor/ini.hpp"

namespace parmor {

namespace {

[[noreturn]] void fail(const std::string &path, int line, const std::string &msg)
{
  throw IngestionError(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

} // namespace

SpMat read_matrix_market(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IngestionError(path + ": cannot open file");
  }

  std::string header;
  if (!std::getline(in, header))
  {
    fail(path, 1, "empty file");
  }
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
  {
    fail(path, 1, "not a Matrix Market matrix file");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
  {
    fail(path, 1, "unsupported format '" + format + "' (coordinate|array)");
  }
  if (field != "real" && field != "integer")
  {
    fail(path, 1, "unsupported field '" + field + "' (real|integer)");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
  {
    fail(path, 1, "unsupported symmetry '" + symmetry + "' (general|symmetric)");
  }

  int lineno = 1;
  std::string line;
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line))
    {
      lineno++;
      size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%')
      {
        continue;
      }
      return true;
    }
    return false;
  };

  if (!next_data_line())
  {
    fail(path, lineno, "missing size line");
  }

  std::istringstream sz(line);
  long long rows = 0, cols = 0, nnz = -1;
  if (coordinate)
  {
    if (!(sz >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    {
      fail(path, lineno, "bad coordinate size line '" + line + "'");
    }
  }
  else
  {
    if (!(sz >> rows >> cols) || rows < 0 || cols < 0)
    {
      fail(path, lineno, "bad array size line '" + line + "'");
    }
  }
  if (symmetric && rows != cols)
  {
    fail(path, lineno, "symmetric matrix must be square");
  }

  std::vector<Eigen::Triplet<double>> triplets;
  if (coordinate)
  {
    triplets.reserve(static_cast<size_t>(symmetric ? 2 * nnz : nnz));
    for (long long k = 0; k < nnz; k++)
    {
      if (!next_data_line())
      {
        fail(path, lineno, "expected " + std::to_string(nnz) + " entries, got " +
                               std::to_string(k));
      }
      std::istringstream es(line);
      long long i, j;
      double v;
      if (!(es >> i >> j >> v) || i < 1 || j < 1 || i > rows || j > cols)
      {
        fail(path, lineno, "bad entry '" + line + "'");
      }
      triplets.emplace_back(i - 1, j - 1, v);
      if (symmetric && i != j)
      {
        triplets.emplace_back(j - 1, i - 1, v);
      }
    }
  }
  else
  {
    // Array format stores the dense matrix column-major; symmetric variants
    // store only the lower triangle, column by column.
    for (long long j = 0; j < cols; j++)
    {
      for (long long i = symmetric ? j : 0; i < rows; i++)
      {
        if (!next_data_line())
        {
          fail(path, lineno, "truncated array data");
        }
        std::istringstream es(line);
        double v;
        if (!(es >> v))
        {
          fail(path, lineno, "bad array value '" + line + "'");
        }
        if (v != 0.0)
        {
          triplets.emplace_back(i, j, v);
          if (symmetric && i != j)
          {
            triplets.emplace_back(j, i, v);
          }
        }
      }
    }
  }

  SpMat M(rows, cols);
  M.setFromTriplets(triplets.begin(), triplets.end());
  M.makeCompressed();
  return M;
}

void write_matrix_market(const SpMat &M, const std::string &path)
{
  std::ostringstream out;
  out << "%%MatrixMarket matrix coordinate real general\n";
  SpMat C = M;
  C.makeCompressed();
  out << C.rows() << " " << C.cols() << " " << C.nonZeros() << "\n";
  char buf[48];
  for (Index k = 0; k < C.outerSize(); k++)
  {
    for (SpMat::InnerIterator it(C, k); it; ++it)
    {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                    static_cast<long long>(it.row() + 1),
                    static_cast<long long>(it.col() + 1), it.value());
      out << buf;
    }
  }
  atomic_write_file(path, out.str());
}

ParamSeparableLTI load_model_manifest(const std::string &manifest_path)
{
  IniFile file;
  try
  {
    file = IniFile::parse_file(manifest_path);
  }
  catch (const ConfigError &e)
  {
    throw IngestionError(e.what());
  }

  const IniSection *model = file.find("model");
  if (!model)
  {
    throw IngestionError(manifest_path + ": missing [model] section");
  }
  const IniSection *domain = file.find("domain");
  if (!domain)
  {
    throw IngestionError(manifest_path + ": missing [domain] section");
  }

  Index n_x, n_u, n_y;
  Box box;
  try
  {
    n_x = static_cast<Index>(model->require_int("n_x"));
    n_u = static_cast<Index>(model->require_int("n_u"));
    n_y = static_cast<Index>(model->require_int("n_y"));
    auto lo = domain->require_doubles("lo");
    auto hi = domain->require_doubles("hi");
    box.lo = Eigen::Map<const Vec>(lo.data(), static_cast<Index>(lo.size()));
    box.hi = Eigen::Map<const Vec>(hi.data(), static_cast<Index>(hi.size()));
  }
  catch (const ConfigError &e)
  {
    throw IngestionError(manifest_path + ": " + e.what());
  }

  ParamSeparableLTI lti(n_x, n_u, n_y, box);
  const auto base = std::filesystem::path(manifest_path).parent_path();
  for (const IniSection *term : file.find_all("term"))
  {
    std::string family_str, file_str, fn_str;
    try
    {
      family_str = term->require_string("family");
      file_str = term->require_string("file");
      fn_str = term->require_string("function");
    }
    catch (const ConfigError &e)
    {
      throw IngestionError(manifest_path + ": " + e.what());
    }
    LtiFamily fam;
    if (family_str == "E")
      fam = LtiFamily::E;
    else if (family_str == "A")
      fam = LtiFamily::A;
    else if (family_str == "B")
      fam = LtiFamily::B;
    else if (family_str == "C")
      fam = LtiFamily::C;
    else if (family_str == "D")
      fam = LtiFamily::D;
    else
    {
      throw IngestionError(manifest_path + ":" + std::to_string(term->line) +
                           ": unknown family '" + family_str + "' (E|A|B|C|D)");
    }
    ScalarFunction fn = [&] {
      try
      {
        return ScalarFunction::parse(fn_str);
      }
      catch (const ParameterError &e)
      {
        throw IngestionError(manifest_path + ":" + std::to_string(term->line) +
                             ": " + e.what());
      }
    }();
    SpMat M = read_matrix_market((base / file_str).string());
    try
    {
      lti.add_term(fam, std::move(M), std::move(fn));
    }
    catch (const DimensionError &e)
    {
      throw IngestionError(manifest_path + ":" + std::to_string(term->line) + ": " +
                           file_str + ": " + e.what());
    }
  }
  return lti;
}

void save_model_manifest(const ParamSeparableLTI &model, const std::string &dir,
                         const std::string &manifest_name)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw IngestionError(dir + ": cannot create directory: " + ec.message());
  }

  std::ostringstream out;
  out << "# parametric LTI model manifest\n";
  out << "[model]\n";
  out << "n_x = " << model.n_x() << "\n";
  out << "n_u = " << model.n_u() << "\n";
  out << "n_y = " << model.n_y() << "\n\n";
  out << "[domain]\n";
  out << "lo =";
  for (Index i = 0; i < model.domain().lo.size(); i++)
  {
    out << " " << fmt_float(model.domain().lo[i]);
  }
  out << "\nhi =";
  for (Index i = 0; i < model.domain().hi.size(); i++)
  {
    out << " " << fmt_float(model.domain().hi[i]);
  }
  out << "\n";

  for (LtiFamily fam : {LtiFamily::E, LtiFamily::A, LtiFamily::B, LtiFamily::C,
                        LtiFamily::D})
  {
    const auto &terms = model.terms(fam);
    for (size_t i = 0; i < terms.size(); i++)
    {
      std::string fname = std::string(lti_family_name(fam)) + std::to_string(i) +
                          ".mtx";
      write_matrix_market(terms[i].M, (fs::path(dir) / fname).string());
      out << "\n[term]\n";
      out << "family = " << lti_family_name(fam) << "\n";
      out << "file = " << fname << "\n";
      out << "function = " << terms[i].f.describe() << "\n";
    }
  }
  atomic_write_file((fs::path(dir) / manifest_name).string(), out.str());
}

} // namespace parmor
