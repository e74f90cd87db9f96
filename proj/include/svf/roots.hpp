// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "svf/error.hpp"

namespace svf {

// Absolute tolerance for root refinement in coordinate units.
inline constexpr double kRootTolerance = 1e-12;

// Root of f on [a, b] by bisection. f(a) and f(b) must not share a strict sign.
template <class F>
double bisect(F&& f, double a, double b, double tol = kRootTolerance) {
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0 && fb > 0) || (fa < 0 && fb < 0))
    fail(ErrorCode::DegenerateRoot, "sign change not bracketed on [" + std::to_string(a) +
                                        ", " + std::to_string(b) + "]");
  if (fa == 0) return a;
  if (fb == 0) return b;
  for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Safeguarded Newton: fdf(x) returns {f(x), f'(x)}. Newton steps that leave the
// current bracket are replaced by bisection, so convergence is guaranteed.
template <class FdF>
double bisect_newton(FdF&& fdf, double a, double b, double tol = kRootTolerance) {
  auto [fa, dfa] = fdf(a);
  auto [fb, dfb] = fdf(b);
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0 && fb > 0) || (fa < 0 && fb < 0))
    fail(ErrorCode::DegenerateRoot, "sign change not bracketed on [" + std::to_string(a) +
                                        ", " + std::to_string(b) + "]");
  if (fa == 0) return a;
  if (fb == 0) return b;
  // Orient so that f(lo) < 0 < f(hi).
  double lo = fa < 0 ? a : b;
  double hi = fa < 0 ? b : a;
  double x = 0.5 * (a + b);
  double step_prev = std::abs(b - a);
  double step = step_prev;
  auto [f, df] = fdf(x);
  for (int it = 0; it < 200; ++it) {
    const bool newton_ok = df != 0 && std::isfinite(df) &&
                           ((x - hi) * df - f) * ((x - lo) * df - f) < 0 &&
                           std::abs(2.0 * f) < std::abs(step_prev * df);
    step_prev = step;
    if (newton_ok) {
      step = f / df;
      x -= step;
    } else {
      step = 0.5 * (hi - lo);
      x = lo + step;
    }
    if (std::abs(step) < tol) return x;
    std::tie(f, df) = fdf(x);
    if (f == 0) return x;
    if (f < 0)
      lo = x;
    else
      hi = x;
    if (std::abs(hi - lo) < tol) return 0.5 * (hi + lo);
  }
  return x;
}

}  // namespace svf
