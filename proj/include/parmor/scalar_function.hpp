// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_SCALAR_FUNCTION_HPP
#define PARMOR_SCALAR_FUNCTION_HPP

#include <functional>
#include <string>
#include <vector>

#include "parmor/types.hpp"

namespace parmor {

// Piecewise-linear bump: 0 outside [a, b], 1 at the midpoint (a+b)/2,
// linear in between. Throws ParameterError unless a < b.
double hat(double x, double a, double b);

// Scalar coefficient function f(p) of the model parameter. These weight the
// coefficient matrices of both the full model terms and the ROM ansatz.
// Serializable kinds: constant, hat (on one p-axis), linear (on one p-axis).
// The user kind wraps an arbitrary callable and cannot be serialized.
class ScalarFunction {
public:
  enum class Kind
  {
    Constant,
    Hat,
    Linear,
    User
  };

  static ScalarFunction constant(double c);
  static ScalarFunction hat_bump(Index axis, double a, double b);
  // c0 + c1 * p[axis]
  static ScalarFunction linear(Index axis, double c0, double c1);
  static ScalarFunction user(std::function<double(const Vec &)> fn,
                             std::string label = "user");

  double operator()(const Vec &p) const;

  Kind kind() const { return kind_; }

  // True when the function provably never takes negative values (constant
  // c >= 0 or hat). This is the admission test for R/Q ansatz weights when
  // the PSD-safe mode is off.
  bool certified_nonnegative() const;

  // Serialization token, e.g. "const 1", "hat 0 0.5 1.5", "linear 0 0 1".
  // Numbers are printed with full precision so files round-trip exactly.
  // Throws StructureError for the user kind.
  std::string describe() const;

  // Inverse of describe(). Throws ParameterError on malformed tokens.
  static ScalarFunction parse(const std::string &token);

private:
  ScalarFunction() = default;

  Kind kind_ = Kind::Constant;
  Index axis_ = 0;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0; // meaning depends on kind
  std::function<double(const Vec &)> fn_;
  std::string label_;
};

// Partition-of-unity hat family on [a, b]: kappa hats on uniform knots
// t_i = a + (i-1)h, h = (b-a)/(kappa-1), each spanning [t_i - h, t_i + h].
// Their sum is exactly 1 on [a, b]. kappa == 1 degenerates to {constant 1}.
std::vector<ScalarFunction> uniform_hat_family(Index kappa, Index axis, double a,
                                               double b);

} // namespace parmor

#endif // PARMOR_SCALAR_FUNCTION_HPP
