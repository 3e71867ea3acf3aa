// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/fom.hpp"

#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace parmor {

const char *lti_family_name(LtiFamily fam)
{
  switch (fam)
  {
    case LtiFamily::E:
      return "E";
    case LtiFamily::A:
      return "A";
    case LtiFamily::B:
      return "B";
    case LtiFamily::C:
      return "C";
    case LtiFamily::D:
      return "D";
  }
  return "?";
}

ParamSeparableLTI::ParamSeparableLTI(Index n_x, Index n_u, Index n_y, Box domain)
  : n_x_(n_x), n_u_(n_u), n_y_(n_y), domain_(std::move(domain))
{
  if (n_x < 1 || n_u < 1 || n_y < 1)
  {
    throw ParameterError("fom: dimensions must satisfy n_x, n_u, n_y >= 1");
  }
  domain_.validate("fom domain");
}

void ParamSeparableLTI::add_term(LtiFamily fam, SpMat M, ScalarFunction f)
{
  Index rows = 0, cols = 0;
  switch (fam)
  {
    case LtiFamily::E:
    case LtiFamily::A:
      rows = n_x_;
      cols = n_x_;
      break;
    case LtiFamily::B:
      rows = n_x_;
      cols = n_u_;
      break;
    case LtiFamily::C:
      rows = n_y_;
      cols = n_x_;
      break;
    case LtiFamily::D:
      rows = n_y_;
      cols = n_u_;
      break;
  }
  if (M.rows() != rows || M.cols() != cols)
  {
    throw DimensionError(std::string("fom: ") + lti_family_name(fam) + " term is " +
                         std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                         ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  terms_[static_cast<int>(fam)].push_back({std::move(M), std::move(f)});
}

const std::vector<ParamSeparableLTI::Term> &
ParamSeparableLTI::terms(LtiFamily fam) const
{
  return terms_[static_cast<int>(fam)];
}

SpMat ParamSeparableLTI::coefficient(LtiFamily fam, const Vec &p) const
{
  Index rows = n_x_, cols = n_x_;
  if (fam == LtiFamily::B)
  {
    cols = n_u_;
  }
  else if (fam == LtiFamily::C)
  {
    rows = n_y_;
  }
  else if (fam == LtiFamily::D)
  {
    rows = n_y_;
    cols = n_u_;
  }
  SpMat sum(rows, cols);
  const auto &terms = terms_[static_cast<int>(fam)];
  if (fam == LtiFamily::E && terms.empty())
  {
    sum.setIdentity();
    return sum;
  }
  for (const auto &term : terms)
  {
    sum += term.f(p) * term.M;
  }
  return sum;
}

CMat ParamSeparableLTI::eval(Complex s, const Vec &p) const
{
  if (p.size() != domain_.dim())
  {
    throw DimensionError("fom: parameter has size " + std::to_string(p.size()) +
                         ", domain has " + std::to_string(domain_.dim()) + " axes");
  }
  SpMat E = coefficient(LtiFamily::E, p);
  SpMat A = coefficient(LtiFamily::A, p);
  Mat B = Mat(coefficient(LtiFamily::B, p));
  Mat C = Mat(coefficient(LtiFamily::C, p));
  Mat D = Mat(coefficient(LtiFamily::D, p));

  auto fail = [&](const char *why) {
    throw EvaluationError(std::string("fom transfer: ") + why + " at s = (" +
                          std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                          "), p = [" +
                          [&] {
                            std::string out;
                            for (Index i = 0; i < p.size(); i++)
                            {
                              out += (i ? " " : "") + std::to_string(p[i]);
                            }
                            return out;
                          }() +
                          "]");
  };

  CMat X;
  if (n_x_ < kDenseSolveLimit)
  {
    CMat pencil = s * CMat(Mat(E).cast<Complex>()) - Mat(A).cast<Complex>();
    Eigen::PartialPivLU<CMat> lu(pencil);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-300)
    {
      fail("pencil sE(p) - A(p) is singular");
    }
    X = lu.solve(B.cast<Complex>());
  }
  else
  {
    Eigen::SparseMatrix<Complex> pencil =
        (s * E.cast<Complex>() - A.cast<Complex>()).pruned();
    pencil.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(pencil);
    if (lu.info() != Eigen::Success)
    {
      fail("sparse factorization of sE(p) - A(p) failed");
    }
    X = lu.solve(B.cast<Complex>());
  }
  return C.cast<Complex>() * X + D.cast<Complex>();
}

CMat CachedTransfer::eval(Complex s, const Vec &p) const
{
  std::vector<double> key(2 + static_cast<size_t>(p.size()));
  key[0] = s.real();
  key[1] = s.imag();
  for (Index i = 0; i < p.size(); i++)
  {
    key[2 + static_cast<size_t>(i)] = p[i];
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end())
    {
      return it->second;
    }
  }
  CMat H = inner_.eval(s, p); // computed outside the lock
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(std::move(key), std::move(H)).first->second;
}

void CachedTransfer::clear() const
{
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.clear();
}

size_t CachedTransfer::size() const
{
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

MsdParts msd_chain_parts(Index n_masses, double m, double k, double c)
{
  if (n_masses < 1)
  {
    throw ParameterError("msd chain: need at least one mass");
  }
  if (!(m > 0.0) || !(k > 0.0) || !(c > 0.0))
  {
    throw ParameterError("msd chain: mass, stiffness and damping must be positive");
  }
  const Index n_x = 2 * n_masses;
  MsdParts parts;
  parts.n_masses = n_masses;
  parts.m = m;
  parts.k = k;
  parts.c = c;

  // State indices: elongation of spring i at 2i, momentum of mass i at 2i+1
  // (0-based mass index i). With the co-energy gradient Q x = (k s_1,
  // pi_1/m, ...), the chain dynamics
  //   s_i' = v_i - v_{i-1},   pi_i' = -k s_i + k s_{i+1} - c p v_i + u delta_{i1}
  // become x' = (J - p R0) Q x + B u.
  std::vector<Eigen::Triplet<double>> jt, rt, qt;
  for (Index i = 0; i < n_masses; i++)
  {
    const Index si = 2 * i, pi = 2 * i + 1;
    jt.emplace_back(si, pi, 1.0);
    jt.emplace_back(pi, si, -1.0);
    if (i + 1 < n_masses)
    {
      const Index s_next = 2 * (i + 1);
      jt.emplace_back(pi, s_next, 1.0);
      jt.emplace_back(s_next, pi, -1.0);
    }
    rt.emplace_back(pi, pi, c);
    qt.emplace_back(si, si, k);
    qt.emplace_back(pi, pi, 1.0 / m);
  }
  parts.J.resize(n_x, n_x);
  parts.J.setFromTriplets(jt.begin(), jt.end());
  parts.R0.resize(n_x, n_x);
  parts.R0.setFromTriplets(rt.begin(), rt.end());
  parts.Q.resize(n_x, n_x);
  parts.Q.setFromTriplets(qt.begin(), qt.end());
  parts.B.resize(n_x, 1);
  parts.B.insert(1, 0) = 1.0; // force on mass 1
  parts.B.makeCompressed();
  return parts;
}

ParamSeparableLTI msd_chain(Index n_masses, double m, double k, double c)
{
  MsdParts parts = msd_chain_parts(n_masses, m, k, c);
  Box domain;
  domain.lo = Vec::Constant(1, 0.5);
  domain.hi = Vec::Constant(1, 1.5);
  ParamSeparableLTI model(2 * n_masses, 1, 1, domain);
  SpMat JQ = (parts.J * parts.Q).pruned();
  SpMat R0Q = (SpMat(-parts.R0) * parts.Q).pruned();
  SpMat C = SpMat(parts.B.transpose()) * parts.Q;
  model.add_term(LtiFamily::A, JQ, ScalarFunction::constant(1.0));
  model.add_term(LtiFamily::A, R0Q, ScalarFunction::linear(0, 0.0, 1.0));
  model.add_term(LtiFamily::B, parts.B, ScalarFunction::constant(1.0));
  model.add_term(LtiFamily::C, C, ScalarFunction::constant(1.0));
  return model;
}

double error_sigma(const TransferSource &fom, const TransferSource &rom,
                   double omega, const Vec &p)
{
  CMat diff = fom.eval(Complex(0.0, omega), p) - rom.eval(Complex(0.0, omega), p);
  if (diff.size() == 1)
  {
    return std::abs(diff(0, 0));
  }
  return diff.jacobiSvd().singularValues()(0);
}

double error_sigma(const TransferSource &fom, const ParametricRom &rom, double omega,
                   const Vec &p)
{
  CMat diff = fom.eval(Complex(0.0, omega), p) - rom.transfer(Complex(0.0, omega), p);
  if (diff.size() == 1)
  {
    return std::abs(diff(0, 0));
  }
  return diff.jacobiSvd().singularValues()(0);
}

} // namespace parmor
