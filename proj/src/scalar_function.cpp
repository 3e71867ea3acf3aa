// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/scalar_function.hpp"

#include <cstdio>
#include <sstream>

namespace parmor {

namespace {

std::string fmt_full(double x)
{
  // 17 significant digits: lossless double -> text -> double round trip.
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void check_axis(const Vec &p, Index axis, const char *what)
{
  if (axis < 0 || axis >= p.size())
  {
    throw DimensionError(std::string(what) + ": parameter axis " +
                         std::to_string(axis) + " out of range for p of size " +
                         std::to_string(p.size()));
  }
}

} // namespace

double hat(double x, double a, double b)
{
  if (!(a < b))
  {
    throw ParameterError("hat: interval is empty (a >= b)");
  }
  const double c = 0.5 * (a + b);
  if (x <= a || x >= b)
  {
    return 0.0;
  }
  if (x <= c)
  {
    return (x - a) / (c - a);
  }
  return (b - x) / (b - c);
}

ScalarFunction ScalarFunction::constant(double c)
{
  ScalarFunction f;
  f.kind_ = Kind::Constant;
  f.c_ = c;
  return f;
}

ScalarFunction ScalarFunction::hat_bump(Index axis, double a, double b)
{
  if (!(a < b))
  {
    throw ParameterError("hat: interval is empty (a >= b)");
  }
  ScalarFunction f;
  f.kind_ = Kind::Hat;
  f.axis_ = axis;
  f.a_ = a;
  f.b_ = b;
  return f;
}

ScalarFunction ScalarFunction::linear(Index axis, double c0, double c1)
{
  ScalarFunction f;
  f.kind_ = Kind::Linear;
  f.axis_ = axis;
  f.a_ = c0;
  f.b_ = c1;
  return f;
}

ScalarFunction ScalarFunction::user(std::function<double(const Vec &)> fn,
                                    std::string label)
{
  ScalarFunction f;
  f.kind_ = Kind::User;
  f.fn_ = std::move(fn);
  f.label_ = std::move(label);
  return f;
}

double ScalarFunction::operator()(const Vec &p) const
{
  switch (kind_)
  {
    case Kind::Constant:
      return c_;
    case Kind::Hat:
      check_axis(p, axis_, "hat");
      return hat(p[axis_], a_, b_);
    case Kind::Linear:
      check_axis(p, axis_, "linear");
      return a_ + b_ * p[axis_];
    case Kind::User:
      return fn_(p);
  }
  return 0.0; // unreachable
}

bool ScalarFunction::certified_nonnegative() const
{
  switch (kind_)
  {
    case Kind::Constant:
      return c_ >= 0.0;
    case Kind::Hat:
      return true;
    default:
      return false;
  }
}

std::string ScalarFunction::describe() const
{
  switch (kind_)
  {
    case Kind::Constant:
      return "const " + fmt_full(c_);
    case Kind::Hat:
      return "hat " + std::to_string(axis_) + " " + fmt_full(a_) + " " + fmt_full(b_);
    case Kind::Linear:
      return "linear " + std::to_string(axis_) + " " + fmt_full(a_) + " " +
             fmt_full(b_);
    case Kind::User:
      throw StructureError("scalar function '" + label_ +
                           "' has no serial form (user-defined callable)");
  }
  return {}; // unreachable
}

ScalarFunction ScalarFunction::parse(const std::string &token)
{
  std::istringstream in(token);
  std::string kind;
  in >> kind;
  auto read_double = [&](const char *what) {
    double x;
    if (!(in >> x))
    {
      throw ParameterError("scalar function '" + token + "': missing or bad " + what);
    }
    return x;
  };
  auto read_axis = [&]() {
    long long ax;
    if (!(in >> ax) || ax < 0)
    {
      throw ParameterError("scalar function '" + token + "': missing or bad axis");
    }
    return static_cast<Index>(ax);
  };
  auto expect_end = [&]() {
    std::string rest;
    if (in >> rest)
    {
      throw ParameterError("scalar function '" + token + "': trailing tokens");
    }
  };

  if (kind == "const")
  {
    double c = read_double("constant");
    expect_end();
    return constant(c);
  }
  if (kind == "hat")
  {
    Index axis = read_axis();
    double a = read_double("a"), b = read_double("b");
    expect_end();
    return hat_bump(axis, a, b);
  }
  if (kind == "linear")
  {
    Index axis = read_axis();
    double c0 = read_double("c0"), c1 = read_double("c1");
    expect_end();
    return linear(axis, c0, c1);
  }
  throw ParameterError("scalar function '" + token + "': unknown kind '" + kind +
                       "' (expected const|hat|linear)");
}

std::vector<ScalarFunction> uniform_hat_family(Index kappa, Index axis, double a,
                                               double b)
{
  if (kappa < 1)
  {
    throw ParameterError("hat family: kappa must be >= 1");
  }
  if (!(a < b))
  {
    throw ParameterError("hat family: interval is empty (a >= b)");
  }
  std::vector<ScalarFunction> fams;
  if (kappa == 1)
  {
    fams.push_back(ScalarFunction::constant(1.0));
    return fams;
  }
  const double h = (b - a) / static_cast<double>(kappa - 1);
  for (Index i = 0; i < kappa; i++)
  {
    const double t = a + static_cast<double>(i) * h;
    fams.push_back(ScalarFunction::hat_bump(axis, t - h, t + h));
  }
  return fams;
}

} // namespace parmor
