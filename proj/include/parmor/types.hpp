// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_TYPES_HPP
#define PARMOR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace parmor {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;

// Base class for all library errors; subclasses select the failure domain so
// the CLI can map them onto exit codes (config/usage -> 2, runtime -> 1).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A vector or matrix was passed with inconsistent dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

// A scalar argument violates its contract (e.g. hat with a >= b, gamma <= 0).
class ParameterError : public Error {
public:
  using Error::Error;
};

// A structural guarantee would be violated (negative ansatz weight on a PSD
// block, missing cell corner, zero-length edge, ...).
class StructureError : public Error {
public:
  using Error::Error;
};

// A transfer-function evaluation failed; carries the (s, p) location.
class EvaluationError : public Error {
public:
  using Error::Error;
};

// File ingestion (Matrix Market, manifests, ROM files) failed; the message
// names the offending file and, where known, the line.
class IngestionError : public Error {
public:
  using Error::Error;
};

// Config parsing/validation failed; messages are line-anchored.
class ConfigError : public Error {
public:
  using Error::Error;
};

// The optimizer hit a non-finite objective or gradient.
class OptimizationError : public Error {
public:
  using Error::Error;
};

// Axis-aligned box, the model-parameter domain.
struct Box {
  Vec lo;
  Vec hi;

  Index dim() const { return lo.size(); }

  bool contains(const Vec &p, double tol = 0.0) const
  {
    if (p.size() != lo.size())
    {
      return false;
    }
    for (Index i = 0; i < p.size(); i++)
    {
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol)
      {
        return false;
      }
    }
    return true;
  }

  void validate(const std::string &what) const
  {
    if (lo.size() != hi.size() || lo.size() == 0)
    {
      throw ParameterError(what + ": box bounds must be nonempty and equal-sized");
    }
    for (Index i = 0; i < lo.size(); i++)
    {
      if (!(lo[i] < hi[i]))
      {
        throw ParameterError(what + ": box axis " + std::to_string(i) +
                             " is empty (lo >= hi)");
      }
    }
  }
};

} // namespace parmor

#endif // PARMOR_TYPES_HPP
