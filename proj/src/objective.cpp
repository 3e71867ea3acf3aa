// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/objective.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "parmor/log.hpp"
#include "parmor/reshape.hpp"

namespace parmor {

namespace {

void check_inputs(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                  double gamma, const std::vector<SamplePoint> &samples)
{
  if (!(gamma > 0.0))
  {
    throw ParameterError("loss level gamma must be positive, got " +
                         std::to_string(gamma));
  }
  if (samples.empty())
  {
    throw ParameterError("sample set must not be empty");
  }
  if (theta.size() != rom.n_theta())
  {
    throw DimensionError("theta has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(rom.n_theta()));
  }
  if (fom.n_u() != rom.n_u() || fom.n_y() != rom.n_y())
  {
    throw DimensionError("transfer source and ROM input/output dimensions differ");
  }
}

// Shared per-sample state: the assembled ROM, the LU of Phi = s I - A, the
// solve X = Phi^{-1} B, and the pointwise error matrix.
struct DiffState {
  AssembledRom a;
  Mat Ceff;
  Eigen::PartialPivLU<CMat> lu;
  CMat X; // Phi^{-1} B
  CMat M; // H - H_r
};

DiffState make_diff_state(const ParametricRom &rom, const Vec &theta,
                          const TransferSource &fom, Complex s, const Vec &p)
{
  DiffState st;
  const CMat H = fom.eval(s, p);
  st.a = rom.assemble_with(theta, p);
  st.Ceff = rom.effective_C(st.a);

  CMat phi = (-rom.system_matrix(st.a)).cast<Complex>();
  phi.diagonal().array() += s;
  st.lu.compute(phi);
  st.X = st.lu.solve(st.a.B.cast<Complex>().eval());
  const CMat Hr = st.Ceff.cast<Complex>() * st.X + rom.effective_D(st.a).cast<Complex>();
  st.M = H - Hr;
  return st;
}

CMat output_map_solve(const DiffState &st)
{
  // C Phi^{-1} through the transposed factorization; no inverse is formed.
  // The solve must land in a plain matrix before transposing: nesting the
  // Solve expression routes Eigen through an evaluator without transposed-
  // decomposition support.
  const CMat t = st.lu.transpose().solve(st.Ceff.transpose().cast<Complex>().eval());
  return t.transpose();
}

// Gradient of sum_j w_j sigma_j at one sample, folded through the weighted
// rank-one factor W = sum_j w_j v_j u_j^H (n_u x n_y). Every theta block is
// linear in W, so one pass covers a sample's whole active set. Adds into grad.
void accumulate_sigma_gradient(const ParametricRom &rom, const Vec &theta,
                               const DiffState &st, const CMat &W, Vec &grad)
{
  const ThetaLayout &layout = rom.layout();
  const AnsatzSpec &spec = rom.ansatz();
  const AssembledRom &a = st.a;
  const CMat CPhiInv = output_map_solve(st);

  const CMat XW = st.X * W;                 // Phi^{-1} B W, r x n_y
  const Mat ReXW = XW.real();
  const Mat ReYmid = (XW * CPhiInv).real(); // Re(Phi^{-1} B W C Phi^{-1})

  auto add_blocks = [&](Family fam, const Vec &flat) {
    const Vec &weights = a.weights[static_cast<int>(fam)];
    for (Index i = 0; i < layout.count(fam); i++)
    {
      if (weights[i] != 0.0)
      {
        grad.segment(layout.offset(fam, i), flat.size()) += weights[i] * flat;
      }
    }
  };

  // Input map; in port-Hamiltonian mode B also drives the output map B^T Q~.
  {
    Mat GB = -(W * CPhiInv).transpose().real();
    if (spec.ph_mode)
    {
      GB -= a.Qtil * ReXW;
    }
    add_blocks(Family::B, ftv(GB));
  }
  if (layout.count(Family::C) > 0)
  {
    add_blocks(Family::C, ftv(Mat(-XW.transpose().real())));
  }
  if (layout.count(Family::D) > 0)
  {
    add_blocks(Family::D, ftv(Mat(-W.transpose().real())));
  }

  // State-space blocks enter through Phi only; the real parts of
  //   Y1 = Q~ Phi^{-1} B W C Phi^{-1},  Y2 = Phi^{-1} B W C Phi^{-1} (J - R~)
  // carry everything (the reshaped directions are real).
  const Mat ReY1 = a.Qtil * ReYmid;
  Mat ReY2 = ReYmid * (a.J - a.Rtil);
  if (spec.ph_mode)
  {
    ReY2 += ReXW * a.B.transpose(); // output-map coupling through Q~
  }

  if (layout.count(Family::J) > 0)
  {
    add_blocks(Family::J, sutv(Mat(ReY1 - ReY1.transpose())));
  }
  const Mat SR = ReY1 + ReY1.transpose();
  for (Index i = 0; i < layout.count(Family::R); i++)
  {
    const double w = a.weights[static_cast<int>(Family::R)][i];
    if (w == 0.0)
    {
      continue;
    }
    const Mat dir = spec.psd_safe_mode
                      ? a.VR
                      : vtu(layout.block(theta, Family::R, i), layout.r);
    grad.segment(layout.offset(Family::R, i), layout.length(Family::R)) +=
      w * utv(Mat(SR * dir));
  }
  const Mat SQ = ReY2 + ReY2.transpose();
  for (Index i = 0; i < layout.count(Family::Q); i++)
  {
    const double w = a.weights[static_cast<int>(Family::Q)][i];
    if (w == 0.0)
    {
      continue;
    }
    const Mat dir = spec.psd_safe_mode
                      ? a.VQ
                      : vtu(layout.block(theta, Family::Q, i), layout.r);
    grad.segment(layout.offset(Family::Q, i), layout.length(Family::Q)) -=
      w * utv(Mat(SQ * dir));
  }
}

struct SampleResult {
  double value = 0.0;
  Vec residuals;
  double max_sigma = 0.0;
  bool active = false;
  Vec grad; // filled only when a gradient was requested and the sample is active
};

SampleResult eval_sample(const ParametricRom &rom, const Vec &theta,
                         const TransferSource &fom, double gamma, const SamplePoint &sp,
                         bool want_gradient)
{
  SampleResult out;
  const Complex s(0.0, sp.omega);
  const DiffState st = make_diff_state(rom, theta, fom, s, sp.p);

  const unsigned svd_opts =
    want_gradient ? static_cast<unsigned>(Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::JacobiSVD<CMat> svd(st.M, svd_opts);
  const Vec sig = svd.singularValues();

  out.residuals = (sig.array() - gamma).max(0.0).matrix();
  out.max_sigma = sig[0];
  out.value = out.residuals.squaredNorm() / gamma;
  out.active = (out.residuals.array() > 0.0).any();

  if (want_gradient && out.active)
  {
    CMat W = CMat::Zero(rom.n_u(), rom.n_y());
    for (Index j = 0; j < out.residuals.size(); j++)
    {
      if (out.residuals[j] > 0.0)
      {
        W.noalias() += ((2.0 / gamma) * out.residuals[j]) *
                       (svd.matrixV().col(j) * svd.matrixU().col(j).adjoint());
      }
    }
    out.grad = Vec::Zero(rom.n_theta());
    accumulate_sigma_gradient(rom, theta, st, W, out.grad);
  }
  return out;
}

// Runs fn(0..n-1) on up to `threads` workers. Work items must only touch
// their own slot; the caller reduces afterwards in index order.
template <typename Fn>
void parallel_for(Index n, int threads, Fn &&fn)
{
  const Index use = std::min<Index>(std::max(threads, 1), n);
  if (use <= 1)
  {
    for (Index i = 0; i < n; i++)
    {
      fn(i);
    }
    return;
  }

  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;)
    {
      const Index i = next.fetch_add(1);
      if (i >= n)
      {
        return;
      }
      try
      {
        fn(i);
      }
      catch (...)
      {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error)
        {
          first_error = std::current_exception();
        }
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(use) - 1);
  for (Index t = 0; t + 1 < use; t++)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread &th : pool)
  {
    th.join();
  }
  if (first_error)
  {
    std::rethrow_exception(first_error);
  }
}

// Shared driver: per-sample slots evaluated independently, then a reduction
// in sample order so results do not depend on the thread count.
LossBreakdown evaluate(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                       double gamma, const std::vector<SamplePoint> &samples, int threads,
                       Vec *grad)
{
  check_inputs(rom, theta, fom, gamma, samples);
  const Index n = static_cast<Index>(samples.size());
  const bool want_gradient = grad != nullptr;

  std::vector<SampleResult> slots(static_cast<size_t>(n));
  parallel_for(n, threads, [&](Index i) {
    slots[static_cast<size_t>(i)] =
      eval_sample(rom, theta, fom, gamma, samples[static_cast<size_t>(i)], want_gradient);
  });

  LossBreakdown out;
  out.residuals.reserve(slots.size());
  if (want_gradient)
  {
    *grad = Vec::Zero(rom.n_theta());
  }
  for (Index i = 0; i < n; i++)
  {
    SampleResult &slot = slots[static_cast<size_t>(i)];
    out.value += slot.value;
    out.max_sigma = std::max(out.max_sigma, slot.max_sigma);
    if (slot.active)
    {
      out.active.push_back(i);
    }
    if (want_gradient && slot.grad.size() > 0)
    {
      *grad += slot.grad;
    }
    out.residuals.push_back(std::move(slot.residuals));
  }
  return out;
}

} // namespace

LossBreakdown loss(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                   double gamma, const std::vector<SamplePoint> &samples, int threads)
{
  return evaluate(rom, theta, fom, gamma, samples, threads, nullptr);
}

Vec singular_gradient(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                      Complex s0, const Vec &p, Index j)
{
  if (theta.size() != rom.n_theta())
  {
    throw DimensionError("theta has length " + std::to_string(theta.size()) +
                         ", expected " + std::to_string(rom.n_theta()));
  }
  const Index nsv = std::min(rom.n_u(), rom.n_y());
  if (j < 0 || j >= nsv)
  {
    throw ParameterError("singular value index " + std::to_string(j) +
                         " out of range [0, " + std::to_string(nsv) + ")");
  }

  const DiffState st = make_diff_state(rom, theta, fom, s0, p);
  Eigen::JacobiSVD<CMat> svd(
    st.M, static_cast<unsigned>(Eigen::ComputeThinU | Eigen::ComputeThinV));
  const Vec sig = svd.singularValues();

  const double tau = 1e-8 * sig[0];
  bool degenerate = sig[j] <= tau;
  degenerate = degenerate || (j > 0 && sig[j - 1] - sig[j] < tau);
  degenerate = degenerate || (j + 1 < nsv && sig[j] - sig[j + 1] < tau);
  if (degenerate)
  {
    log::info("warning: singular value " + std::to_string(j) +
              " is numerically zero or repeated; the returned gradient is one "
              "subgradient direction");
  }

  const CMat W = svd.matrixV().col(j) * svd.matrixU().col(j).adjoint();
  Vec grad = Vec::Zero(rom.n_theta());
  accumulate_sigma_gradient(rom, theta, st, W, grad);
  return grad;
}

Vec loss_gradient(const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
                  double gamma, const std::vector<SamplePoint> &samples, int threads)
{
  Vec grad;
  evaluate(rom, theta, fom, gamma, samples, threads, &grad);
  return grad;
}

double loss_value_and_gradient(const ParametricRom &rom, const Vec &theta,
                               const TransferSource &fom, double gamma,
                               const std::vector<SamplePoint> &samples, Vec &grad,
                               int threads)
{
  return evaluate(rom, theta, fom, gamma, samples, threads, &grad).value;
}

} // namespace parmor
