// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_ROM_HPP
#define PARMOR_ROM_HPP

#include <array>
#include <atomic>
#include <vector>

#include "parmor/scalar_function.hpp"
#include "parmor/types.hpp"

namespace parmor {

// Matrix families of the ROM parameterization, in the fixed order their
// blocks appear inside the flat design vector theta.
enum class Family : int
{
  B = 0,
  C = 1,
  D = 2,
  J = 3,
  R = 4,
  Q = 5
};

constexpr std::array<Family, 6> kFamilies = {Family::B, Family::C, Family::D,
                                             Family::J, Family::R, Family::Q};

const char *family_name(Family fam);

// Ansatz description: per-family scalar weight functions f_i(p) plus the
// structural switches.
//
//  - psd_safe_mode: R and Q are assembled as V V^T with V = sum_i f_i U_i,
//    which stays PSD for arbitrary-sign f_i (the default product-of-factors
//    form needs every f_i^R, f_i^Q nonnegative).
//  - ph_mode: the output map is taken as C = B^T (Q + eps_Q I) and D = 0,
//    producing a port-Hamiltonian ROM; requires n_u == n_y and empty fC/fD.
//  - eps_R/eps_Q: tiny diagonal shifts making Q positive definite and the
//    system matrix asymptotically (not just marginally) stable.
struct AnsatzSpec {
  std::vector<ScalarFunction> fB, fC, fD, fJ, fR, fQ;
  bool psd_safe_mode = false;
  bool ph_mode = false;
  double eps_R = 1e-8;
  double eps_Q = 1e-8;
  // Optional parameter domain; when nonempty, evaluations outside it log a
  // domain warning (they remain well-defined).
  Box domain{Vec(), Vec()};

  const std::vector<ScalarFunction> &family(Family fam) const;
  std::vector<ScalarFunction> &family(Family fam);
};

// Offsets of every theta block. Block order is B, C, D, J, R, Q; within a
// family, blocks are consecutive for i = 1..kappa.
struct ThetaLayout {
  Index r = 0, n_u = 0, n_y = 0;
  std::array<Index, 6> kappa{};        // per-family block counts
  std::array<Index, 6> block_len{};    // length of one block of the family
  std::array<Index, 6> family_begin{}; // offset of the family's first block
  Index n_theta = 0;

  Index offset(Family fam, Index i) const;
  Index length(Family fam) const { return block_len[static_cast<int>(fam)]; }
  Index count(Family fam) const { return kappa[static_cast<int>(fam)]; }

  // Read-only view of the i-th block of the given family inside theta.
  Eigen::Ref<const Vec> block(const Vec &theta, Family fam, Index i) const;
};

// All p-dependent matrices of the ROM at one parameter point, along with the
// evaluated ansatz weights (the gradient assembly reuses them).
struct AssembledRom {
  Mat J, R, Q;         // raw ansatz sums (R, Q before the eps shifts)
  Mat B, C, D;         // C/D as stored; use effective_C/effective_D in ph mode
  Mat Rtil, Qtil;      // R + eps_R I, Q + eps_Q I
  Mat VR, VQ;          // PSD-safe factors (filled only in psd_safe_mode)
  std::array<Vec, 6> weights; // f_i(p) per family, in Family order
};

// The theta-parameterized stable ROM
//
//   x' = (J(p) - R~(p)) Q~(p) x + B(p) u,   y = C(p) x + D(p) u,
//
// where every matrix is an ansatz sum over reshaped theta blocks:
// J_i = vtsu - vtsu^T (skew), R_i = Q_i = vtu vtu^T (PSD), B/C/D_i = vtf.
// The dissipative-Hamiltonian form of the system matrix makes every theta
// correspond to a stable model, so the optimizer can roam freely.
class ParametricRom {
public:
  ParametricRom(Index r, Index n_u, Index n_y, AnsatzSpec spec);

  // The warn-once flag is an atomic, so the compiler-generated special
  // members would be deleted; carry the flag's current value instead.
  ParametricRom(const ParametricRom &other)
    : layout_(other.layout_), spec_(other.spec_), theta_(other.theta_),
      warned_domain_(other.warned_domain_.load())
  {
  }
  ParametricRom &operator=(const ParametricRom &other)
  {
    layout_ = other.layout_;
    spec_ = other.spec_;
    theta_ = other.theta_;
    warned_domain_.store(other.warned_domain_.load());
    return *this;
  }

  const ThetaLayout &layout() const { return layout_; }
  const AnsatzSpec &ansatz() const { return spec_; }
  Index r() const { return layout_.r; }
  Index n_u() const { return layout_.n_u; }
  Index n_y() const { return layout_.n_y; }
  Index n_theta() const { return layout_.n_theta; }

  const Vec &theta() const { return theta_; }
  void set_theta(const Vec &theta);

  // Assemble at p with the stored theta / an explicit theta.
  AssembledRom assemble(const Vec &p) const;
  AssembledRom assemble_with(const Vec &theta, const Vec &p) const;

  // A = (J - R~) Q~; asymptotically stable for eps_R > 0, eps_Q > 0.
  Mat system_matrix(const AssembledRom &asm_rom) const;

  // Output matrices honoring ph_mode (C = B^T Q~, D = 0).
  Mat effective_C(const AssembledRom &asm_rom) const;
  Mat effective_D(const AssembledRom &asm_rom) const;

  // H_r(s, p) = C (sI - A)^{-1} B + D via one complex linear solve.
  CMat transfer(Complex s, const Vec &p) const;
  CMat transfer_with(const Vec &theta, Complex s, const Vec &p) const;
  CMat transfer_assembled(const AssembledRom &asm_rom, Complex s) const;

private:
  ThetaLayout layout_;
  AnsatzSpec spec_;
  Vec theta_;
  mutable std::atomic<bool> warned_domain_{false};
};

// I.i.d. uniform theta on [-iota, iota], reproducible across platforms for a
// fixed seed (raw 64-bit draws are mapped to doubles by hand). Unit scale by
// default: starts with |theta| << 1 tend to share one shallow basin of the
// fitting loss and stall there, while unit-scale starts do not.
Vec random_theta(const ThetaLayout &layout, uint64_t seed, double iota = 1.0);

// Port-Hamiltonian structure check on explicit matrices: J skew, Q symmetric
// positive definite, R symmetric PSD, C = B^T Q, D = 0 (all up to tol
// relative to the matrix scales). Returns true iff all hold.
bool ph_check(const Mat &J, const Mat &R, const Mat &Q, const Mat &B, const Mat &C,
              const Mat &D, double tol = 1e-10);

// ph_check applied to a ROM at one parameter point.
bool is_ph(const ParametricRom &rom, const Vec &p, double tol = 1e-10);

} // namespace parmor

#endif // PARMOR_ROM_HPP
