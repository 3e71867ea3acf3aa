// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_FOM_HPP
#define PARMOR_FOM_HPP

#include <map>
#include <mutex>
#include <vector>

#include "parmor/rom.hpp"
#include "parmor/scalar_function.hpp"
#include "parmor/types.hpp"

namespace parmor {

// Anything that evaluates a transfer function H(s, p). Evaluation must be
// deterministic for fixed (s, p) and safe to call concurrently.
class TransferSource {
public:
  virtual ~TransferSource() = default;

  virtual Index n_u() const = 0;
  virtual Index n_y() const = 0;
  virtual const Box &domain() const = 0;
  virtual CMat eval(Complex s, const Vec &p) const = 0;
};

// Coefficient families of a parameter-separable LTI system
//   E(p) x' = A(p) x + B(p) u,  y = C(p) x + D(p) u,
// with every family a sum of (constant matrix) x (scalar function of p).
enum class LtiFamily : int
{
  E = 0,
  A = 1,
  B = 2,
  C = 3,
  D = 4
};

const char *lti_family_name(LtiFamily fam);

// Full-order model built from coefficient-matrix/scalar-function sums.
// Coefficient matrices are stored sparse; transfer solves densify below
// kDenseSolveLimit states and use a sparse LU above it. Terms for E are
// optional (identity assumed); missing D means a strictly proper model.
class ParamSeparableLTI : public TransferSource {
public:
  struct Term {
    SpMat M;
    ScalarFunction f;
  };

  static constexpr Index kDenseSolveLimit = 2000;

  ParamSeparableLTI(Index n_x, Index n_u, Index n_y, Box domain);

  void add_term(LtiFamily fam, SpMat M, ScalarFunction f);
  const std::vector<Term> &terms(LtiFamily fam) const;

  Index n_x() const { return n_x_; }
  Index n_u() const override { return n_u_; }
  Index n_y() const override { return n_y_; }
  const Box &domain() const override { return domain_; }

  // Assembled coefficient at one parameter point, sum_i f_i(p) M_i.
  SpMat coefficient(LtiFamily fam, const Vec &p) const;

  // H(s, p) = C(p) (s E(p) - A(p))^{-1} B(p) + D(p), one linear solve.
  CMat eval(Complex s, const Vec &p) const override;

private:
  Index n_x_, n_u_, n_y_;
  Box domain_;
  std::vector<Term> terms_[5];
};

// Memoizing wrapper: caches H(s, p) per exact (s, p) key. The cache is the
// reason repeated optimizer sweeps over a fixed sample set only ever pay for
// each full-order solve once; it is safe under concurrent insertion (first
// writer wins; values for equal keys are identical).
class CachedTransfer : public TransferSource {
public:
  explicit CachedTransfer(const TransferSource &inner) : inner_(inner) {}

  Index n_u() const override { return inner_.n_u(); }
  Index n_y() const override { return inner_.n_y(); }
  const Box &domain() const override { return inner_.domain(); }
  CMat eval(Complex s, const Vec &p) const override;

  void clear() const;
  size_t size() const;

private:
  const TransferSource &inner_;
  mutable std::map<std::vector<double>, CMat> cache_;
  mutable std::mutex mutex_;
};

// Adapter presenting a ROM (with its stored theta) as a TransferSource so
// error fields and metrics can treat both sides uniformly.
class RomTransferSource : public TransferSource {
public:
  RomTransferSource(const ParametricRom &rom, Box domain)
    : rom_(rom), domain_(std::move(domain))
  {
  }

  Index n_u() const override { return rom_.n_u(); }
  Index n_y() const override { return rom_.n_y(); }
  const Box &domain() const override { return domain_; }
  CMat eval(Complex s, const Vec &p) const override { return rom_.transfer(s, p); }

private:
  const ParametricRom &rom_;
  Box domain_;
};

// Constituent matrices of the synthetic port-Hamiltonian mass-spring-damper
// chain, exposed so structural tests and the Matrix Market exporter can see
// the pieces and not just the assembled A(p).
//
// Stencil (documented contract): n masses of mass m in a chain; spring i of
// stiffness k couples mass i to mass i-1 (mass 1 anchors to a wall); every
// mass carries a damper c to ground, scaled by the scalar parameter p; a
// force input acts on mass 1 and the collocated output is its velocity.
// States alternate spring elongations and momenta, x = (s1, pi1, ..., sn,
// pin), giving Q = diag(k, 1/m, ...), a canonical tridiagonal-skew J,
// R0 = diag(0, c, 0, c, ...), B = e_2, and R(p) = p R0.
struct MsdParts {
  Index n_masses;
  double m, k, c;
  SpMat J, R0, Q; // n_x x n_x with n_x = 2 n_masses
  SpMat B;        // n_x x 1
};

MsdParts msd_chain_parts(Index n_masses, double m = 4.0, double k = 4.0,
                         double c = 1.0);

// The chain as a parameter-separable model: A(p) = J Q - p (R0 Q), B, C = B^T Q,
// E = I implied, D = 0, SISO, domain p in [0.5, 1.5].
ParamSeparableLTI msd_chain(Index n_masses, double m = 4.0, double k = 4.0,
                            double c = 1.0);

// Largest singular value of H(i omega, p) - H_r(i omega, p).
double error_sigma(const TransferSource &fom, const TransferSource &rom,
                   double omega, const Vec &p);
double error_sigma(const TransferSource &fom, const ParametricRom &rom, double omega,
                   const Vec &p);

} // namespace parmor

#endif // PARMOR_FOM_HPP
