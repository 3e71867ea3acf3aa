// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <utility>

namespace parmor {

namespace {

std::string theta_digest(const Vec &x)
{
  std::ostringstream os;
  os << "[";
  const Index show = std::min<Index>(x.size(), 8);
  for (Index i = 0; i < show; i++)
  {
    os << (i > 0 ? ", " : "") << x[i];
  }
  if (show < x.size())
  {
    os << ", ...";
  }
  os << "] (length " << x.size() << ")";
  return os.str();
}

// Counts evaluations and rejects non-finite values at the source, so a bad
// objective is reported with the theta that produced it.
struct Evaluator {
  const ValueAndGradient &fg;
  Index count = 0;

  double operator()(const Vec &x, Vec &g)
  {
    count++;
    const double f = fg(x, g);
    if (!std::isfinite(f) || !g.allFinite())
    {
      throw OptimizationError("objective or gradient is non-finite at theta = " +
                              theta_digest(x));
    }
    return f;
  }
};

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double dphi = 0.0;
  Vec x, g;
};

struct LineSearchResult {
  bool ok = false;
  double f = 0.0;
  Vec x, g;
};

// Strong-Wolfe line search: bracket by doubling, then zoom with safeguarded
// quadratic interpolation. Falls back to any strictly decreasing point when
// the curvature condition cannot be met within the evaluation budget.
LineSearchResult wolfe_search(Evaluator &eval, const Vec &x0, double f0, const Vec &g0,
                              const Vec &d, double alpha_init, const MinimizeOptions &opts)
{
  const double dphi0 = g0.dot(d);
  constexpr double kAlphaMax = 1e12;

  auto eval_point = [&](double a) {
    Point pt;
    pt.alpha = a;
    pt.x = x0 + a * d;
    pt.f = eval(pt.x, pt.g);
    pt.dphi = pt.g.dot(d);
    return pt;
  };
  auto accept = [](Point &&pt) {
    LineSearchResult r;
    r.ok = true;
    r.f = pt.f;
    r.x = std::move(pt.x);
    r.g = std::move(pt.g);
    return r;
  };

  Point lo, hi;
  bool have_bracket = false;

  Point prev;
  prev.alpha = 0.0;
  prev.f = f0;
  prev.dphi = dphi0;

  double alpha = alpha_init;
  for (Index i = 0; i < opts.max_line_search && !have_bracket; i++)
  {
    Point pt = eval_point(alpha);
    if (pt.f > f0 + opts.c1 * pt.alpha * dphi0 || (i > 0 && pt.f >= prev.f))
    {
      lo = std::move(prev);
      hi = std::move(pt);
      have_bracket = true;
      break;
    }
    if (std::abs(pt.dphi) <= -opts.c2 * dphi0)
    {
      return accept(std::move(pt));
    }
    if (pt.dphi >= 0.0)
    {
      hi = std::move(prev);
      lo = std::move(pt);
      have_bracket = true;
      break;
    }
    prev = std::move(pt);
    if (alpha >= kAlphaMax)
    {
      break;
    }
    alpha = std::min(2.0 * alpha, kAlphaMax);
  }
  if (!have_bracket)
  {
    return {};
  }

  for (Index i = 0; i < opts.max_line_search; i++)
  {
    const double span = hi.alpha - lo.alpha;
    const double a_min = std::min(lo.alpha, hi.alpha);
    const double a_max = std::max(lo.alpha, hi.alpha);

    double trial;
    const double denom = 2.0 * (hi.f - lo.f - lo.dphi * span);
    if (denom != 0.0)
    {
      trial = lo.alpha - lo.dphi * span * span / denom;
    }
    else
    {
      trial = 0.5 * (lo.alpha + hi.alpha);
    }
    const double margin = 0.1 * (a_max - a_min);
    if (!(trial > a_min + margin && trial < a_max - margin))
    {
      trial = 0.5 * (lo.alpha + hi.alpha);
    }

    Point pt = eval_point(trial);
    if (pt.f > f0 + opts.c1 * pt.alpha * dphi0 || pt.f >= lo.f)
    {
      hi = std::move(pt);
    }
    else
    {
      if (std::abs(pt.dphi) <= -opts.c2 * dphi0)
      {
        return accept(std::move(pt));
      }
      if (pt.dphi * (hi.alpha - lo.alpha) >= 0.0)
      {
        hi = lo;
      }
      lo = std::move(pt);
    }
    if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, a_max))
    {
      break;
    }
  }

  if (lo.alpha > 0.0 && lo.f < f0)
  {
    return accept(std::move(lo));
  }
  return {};
}

} // namespace

const char *minimize_status_name(MinimizeStatus status)
{
  switch (status)
  {
    case MinimizeStatus::GradientTol: return "gradient_tol";
    case MinimizeStatus::FTarget: return "f_target";
    case MinimizeStatus::MaxIters: return "max_iters";
    case MinimizeStatus::LineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

MinimizeResult minimize(const ValueAndGradient &fg, const Vec &theta0,
                        const MinimizeOptions &opts)
{
  Evaluator eval{fg};
  MinimizeResult res;

  Vec x = theta0;
  if (x.size() == 0)
  {
    res.status = MinimizeStatus::GradientTol;
    return res;
  }

  Vec g;
  double f = eval(x, g);
  res.history.push_back(f);

  std::deque<Vec> mem_s, mem_y;
  std::deque<double> mem_rho;
  MinimizeStatus status;

  for (;;)
  {
    if (f <= opts.f_target)
    {
      status = MinimizeStatus::FTarget;
      break;
    }
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol)
    {
      status = MinimizeStatus::GradientTol;
      break;
    }
    if (res.iterations >= opts.max_iters)
    {
      status = MinimizeStatus::MaxIters;
      break;
    }

    // Two-loop recursion with the usual s^T y / y^T y seed scaling.
    Vec d = -g;
    const Index m = static_cast<Index>(mem_s.size());
    if (m > 0)
    {
      Vec coef(m);
      for (Index i = m - 1; i >= 0; i--)
      {
        coef[i] = mem_rho[static_cast<size_t>(i)] * mem_s[static_cast<size_t>(i)].dot(d);
        d -= coef[i] * mem_y[static_cast<size_t>(i)];
      }
      d *= mem_s.back().dot(mem_y.back()) / mem_y.back().squaredNorm();
      for (Index i = 0; i < m; i++)
      {
        const double beta =
          mem_rho[static_cast<size_t>(i)] * mem_y[static_cast<size_t>(i)].dot(d);
        d += (coef[i] - beta) * mem_s[static_cast<size_t>(i)];
      }
    }
    if (g.dot(d) >= 0.0)
    {
      // Curvature memory went stale; restart from steepest descent.
      mem_s.clear();
      mem_y.clear();
      mem_rho.clear();
      d = -g;
    }

    const double alpha_init =
      res.iterations == 0 ? std::min(1.0, 1.0 / std::max(1e-12, g.norm())) : 1.0;
    LineSearchResult ls = wolfe_search(eval, x, f, g, d, alpha_init, opts);
    if (!ls.ok)
    {
      status = MinimizeStatus::LineSearchFailed;
      break;
    }

    Vec s = ls.x - x;
    Vec y = ls.g - g;
    x = std::move(ls.x);
    g = std::move(ls.g);
    f = ls.f;

    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm())
    {
      mem_s.push_back(std::move(s));
      mem_y.push_back(std::move(y));
      mem_rho.push_back(1.0 / sy);
      if (static_cast<Index>(mem_s.size()) > std::max<Index>(opts.memory, 1))
      {
        mem_s.pop_front();
        mem_y.pop_front();
        mem_rho.pop_front();
      }
    }

    res.iterations++;
    res.history.push_back(f);
  }

  res.theta = std::move(x);
  res.value = f;
  res.gradient = std::move(g);
  res.evaluations = eval.count;
  res.status = status;
  return res;
}

MinimizeResult minimize(const std::function<double(const Vec &)> &f,
                        const std::function<Vec(const Vec &)> &g, const Vec &theta0,
                        const MinimizeOptions &opts)
{
  const ValueAndGradient fg = [&](const Vec &x, Vec &grad) {
    grad = g(x);
    return f(x);
  };
  return minimize(fg, theta0, opts);
}

} // namespace parmor
