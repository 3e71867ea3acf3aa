// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/rom.hpp"

#include <random>
#include <string>

#include <Eigen/Dense>

#include "parmor/log.hpp"
#include "parmor/reshape.hpp"

namespace parmor {

const char *family_name(Family fam)
{
  switch (fam)
  {
    case Family::B:
      return "B";
    case Family::C:
      return "C";
    case Family::D:
      return "D";
    case Family::J:
      return "J";
    case Family::R:
      return "R";
    case Family::Q:
      return "Q";
  }
  return "?";
}

const std::vector<ScalarFunction> &AnsatzSpec::family(Family fam) const
{
  switch (fam)
  {
    case Family::B:
      return fB;
    case Family::C:
      return fC;
    case Family::D:
      return fD;
    case Family::J:
      return fJ;
    case Family::R:
      return fR;
    default:
      return fQ;
  }
}

std::vector<ScalarFunction> &AnsatzSpec::family(Family fam)
{
  return const_cast<std::vector<ScalarFunction> &>(
      static_cast<const AnsatzSpec &>(*this).family(fam));
}

Index ThetaLayout::offset(Family fam, Index i) const
{
  const int f = static_cast<int>(fam);
  if (i < 0 || i >= kappa[f])
  {
    throw DimensionError(std::string("theta layout: block index ") +
                         std::to_string(i) + " out of range for family " +
                         family_name(fam));
  }
  return family_begin[f] + i * block_len[f];
}

Eigen::Ref<const Vec> ThetaLayout::block(const Vec &theta, Family fam, Index i) const
{
  return theta.segment(offset(fam, i), length(fam));
}

namespace {

ThetaLayout make_layout(Index r, Index n_u, Index n_y, const AnsatzSpec &spec)
{
  ThetaLayout lay;
  lay.r = r;
  lay.n_u = n_u;
  lay.n_y = n_y;
  lay.kappa = {static_cast<Index>(spec.fB.size()), static_cast<Index>(spec.fC.size()),
               static_cast<Index>(spec.fD.size()), static_cast<Index>(spec.fJ.size()),
               static_cast<Index>(spec.fR.size()), static_cast<Index>(spec.fQ.size())};
  lay.block_len = {r * n_u,           n_y * r,    n_y * n_u,
                   strict_tri_len(r), tri_len(r), tri_len(r)};
  Index off = 0;
  for (int f = 0; f < 6; f++)
  {
    lay.family_begin[f] = off;
    off += lay.kappa[f] * lay.block_len[f];
  }
  lay.n_theta = off;
  return lay;
}

} // namespace

ParametricRom::ParametricRom(Index r, Index n_u, Index n_y, AnsatzSpec spec)
  : layout_(make_layout(r, n_u, n_y, spec)), spec_(std::move(spec))
{
  if (r < 1 || n_u < 1 || n_y < 1)
  {
    throw ParameterError("rom: dimensions must satisfy r, n_u, n_y >= 1");
  }
  if (spec_.eps_R < 0.0 || spec_.eps_Q < 0.0)
  {
    throw ParameterError("rom: eps_R and eps_Q must be >= 0");
  }
  if (spec_.ph_mode)
  {
    if (n_u != n_y)
    {
      throw ParameterError("rom: ph_mode needs a square transfer function "
                           "(n_u == n_y)");
    }
    if (!spec_.fC.empty() || !spec_.fD.empty())
    {
      throw ParameterError("rom: ph_mode derives C and D from B and Q; "
                           "fC/fD must be empty");
    }
  }
  if (!spec_.psd_safe_mode)
  {
    for (Family fam : {Family::R, Family::Q})
    {
      for (const auto &f : spec_.family(fam))
      {
        if (!f.certified_nonnegative())
        {
          throw StructureError(
              std::string("rom: ansatz weight for family ") + family_name(fam) +
              " is not certified nonnegative; use constants >= 0 or hats, or "
              "enable psd_safe_mode");
        }
      }
    }
  }
  if (spec_.domain.lo.size() > 0)
  {
    spec_.domain.validate("rom domain");
  }
  theta_ = Vec::Zero(layout_.n_theta);
}

void ParametricRom::set_theta(const Vec &theta)
{
  if (theta.size() != layout_.n_theta)
  {
    throw DimensionError("rom: theta has length " + std::to_string(theta.size()) +
                         ", layout expects " + std::to_string(layout_.n_theta));
  }
  theta_ = theta;
}

AssembledRom ParametricRom::assemble(const Vec &p) const
{
  return assemble_with(theta_, p);
}

AssembledRom ParametricRom::assemble_with(const Vec &theta, const Vec &p) const
{
  if (theta.size() != layout_.n_theta)
  {
    throw DimensionError("rom: theta has length " + std::to_string(theta.size()) +
                         ", layout expects " + std::to_string(layout_.n_theta));
  }
  if (spec_.domain.lo.size() > 0 && !spec_.domain.contains(p) &&
      !warned_domain_.exchange(true))
  {
    log::info("rom: evaluation outside the declared parameter domain");
  }

  const Index r = layout_.r, n_u = layout_.n_u, n_y = layout_.n_y;
  AssembledRom out;
  out.J = Mat::Zero(r, r);
  out.R = Mat::Zero(r, r);
  out.Q = Mat::Zero(r, r);
  out.B = Mat::Zero(r, n_u);
  out.C = Mat::Zero(n_y, r);
  out.D = Mat::Zero(n_y, n_u);

  for (int f = 0; f < 6; f++)
  {
    const Family fam = kFamilies[f];
    const auto &fns = spec_.family(fam);
    Vec &w = out.weights[f];
    w.resize(static_cast<Index>(fns.size()));
    for (Index i = 0; i < w.size(); i++)
    {
      w[i] = fns[static_cast<size_t>(i)](p);
    }
  }

  for (Index i = 0; i < layout_.count(Family::B); i++)
  {
    out.B += out.weights[0][i] * vtf(layout_.block(theta, Family::B, i), r, n_u);
  }
  for (Index i = 0; i < layout_.count(Family::C); i++)
  {
    out.C += out.weights[1][i] * vtf(layout_.block(theta, Family::C, i), n_y, r);
  }
  for (Index i = 0; i < layout_.count(Family::D); i++)
  {
    out.D += out.weights[2][i] * vtf(layout_.block(theta, Family::D, i), n_y, n_u);
  }
  for (Index i = 0; i < layout_.count(Family::J); i++)
  {
    Mat S = vtsu(layout_.block(theta, Family::J, i), r);
    out.J += out.weights[3][i] * (S - S.transpose());
  }

  if (spec_.psd_safe_mode)
  {
    // V = sum_i f_i U_i keeps V V^T PSD even for negative weights.
    out.VR = Mat::Zero(r, r);
    out.VQ = Mat::Zero(r, r);
    for (Index i = 0; i < layout_.count(Family::R); i++)
    {
      out.VR += out.weights[4][i] * vtu(layout_.block(theta, Family::R, i), r);
    }
    for (Index i = 0; i < layout_.count(Family::Q); i++)
    {
      out.VQ += out.weights[5][i] * vtu(layout_.block(theta, Family::Q, i), r);
    }
    out.R = out.VR * out.VR.transpose();
    out.Q = out.VQ * out.VQ.transpose();
  }
  else
  {
    for (Index i = 0; i < layout_.count(Family::R); i++)
    {
      if (out.weights[4][i] < 0.0)
      {
        throw StructureError("rom: negative R ansatz weight at this p breaks "
                             "positive semi-definiteness (enable psd_safe_mode)");
      }
      Mat U = vtu(layout_.block(theta, Family::R, i), r);
      out.R += out.weights[4][i] * (U * U.transpose());
    }
    for (Index i = 0; i < layout_.count(Family::Q); i++)
    {
      if (out.weights[5][i] < 0.0)
      {
        throw StructureError("rom: negative Q ansatz weight at this p breaks "
                             "positive semi-definiteness (enable psd_safe_mode)");
      }
      Mat U = vtu(layout_.block(theta, Family::Q, i), r);
      out.Q += out.weights[5][i] * (U * U.transpose());
    }
  }

  // Gram accumulation is symmetric in exact arithmetic; mirroring the upper
  // triangle makes ||R - R^T|| = 0 hold bit-exactly in floating point too.
  out.R = Mat(out.R.selfadjointView<Eigen::Upper>());
  out.Q = Mat(out.Q.selfadjointView<Eigen::Upper>());
  out.Rtil = out.R + spec_.eps_R * Mat::Identity(r, r);
  out.Qtil = out.Q + spec_.eps_Q * Mat::Identity(r, r);
  return out;
}

Mat ParametricRom::system_matrix(const AssembledRom &asm_rom) const
{
  return (asm_rom.J - asm_rom.Rtil) * asm_rom.Qtil;
}

Mat ParametricRom::effective_C(const AssembledRom &asm_rom) const
{
  if (spec_.ph_mode)
  {
    return asm_rom.B.transpose() * asm_rom.Qtil;
  }
  return asm_rom.C;
}

Mat ParametricRom::effective_D(const AssembledRom &asm_rom) const
{
  if (spec_.ph_mode)
  {
    return Mat::Zero(layout_.n_y, layout_.n_u);
  }
  return asm_rom.D;
}

CMat ParametricRom::transfer(Complex s, const Vec &p) const
{
  return transfer_with(theta_, s, p);
}

CMat ParametricRom::transfer_with(const Vec &theta, Complex s, const Vec &p) const
{
  return transfer_assembled(assemble_with(theta, p), s);
}

CMat ParametricRom::transfer_assembled(const AssembledRom &asm_rom, Complex s) const
{
  const Index r = layout_.r;
  CMat Phi = -system_matrix(asm_rom).cast<Complex>();
  Phi.diagonal().array() += s;
  Eigen::PartialPivLU<CMat> lu(Phi);
  // PartialPivLU has no singularity signal; a vanishing U diagonal entry is
  // the telltale (possible only at eps_R = 0 on the imaginary axis).
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-300)
  {
    throw EvaluationError("rom transfer: sI - A is singular at s = (" +
                          std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                          ")");
  }
  CMat X = lu.solve(asm_rom.B.cast<Complex>());
  return effective_C(asm_rom).cast<Complex>() * X +
         effective_D(asm_rom).cast<Complex>();
}

Vec random_theta(const ThetaLayout &layout, uint64_t seed, double iota)
{
  std::mt19937_64 eng(seed);
  Vec theta(layout.n_theta);
  for (Index i = 0; i < theta.size(); i++)
  {
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53; // [0, 1)
    theta[i] = iota * (2.0 * u - 1.0);
  }
  return theta;
}

bool ph_check(const Mat &J, const Mat &R, const Mat &Q, const Mat &B, const Mat &C,
              const Mat &D, double tol)
{
  const double scale_J = std::max(1.0, J.norm());
  const double scale_R = std::max(1.0, R.norm());
  const double scale_Q = std::max(1.0, Q.norm());
  if ((J + J.transpose()).norm() > tol * scale_J)
  {
    return false;
  }
  if ((R - R.transpose()).norm() > tol * scale_R ||
      (Q - Q.transpose()).norm() > tol * scale_Q)
  {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Mat> esR(0.5 * (R + R.transpose()));
  if (esR.eigenvalues().minCoeff() < -tol * scale_R)
  {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Mat> esQ(0.5 * (Q + Q.transpose()));
  if (esQ.eigenvalues().minCoeff() <= -tol * scale_Q) // definite up to tol
  {
    return false;
  }
  const double scale_C = std::max(1.0, (B.transpose() * Q).norm());
  if ((C - B.transpose() * Q).norm() > tol * scale_C)
  {
    return false;
  }
  return D.norm() <= tol;
}

bool is_ph(const ParametricRom &rom, const Vec &p, double tol)
{
  AssembledRom a = rom.assemble(p);
  return ph_check(a.J, a.Rtil, a.Qtil, a.B, rom.effective_C(a), rom.effective_D(a),
                  tol);
}

} // namespace parmor
