// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "fracmol/error.hpp"

namespace fracmol::optimize {

struct Bracket {
  double lo;
  double mid;
  double hi;
};

/// Picks the largest sample of f over an increasing grid and returns its
/// neighbours. Throws BracketNotFound if the maximum sits on either end.
template <class F>
Bracket bracket_maximum(F&& f, const std::vector<double>& grid) {
  require(grid.size() >= 3, "bracket_maximum: need at least three grid points");
  std::size_t best = 0;
  double best_value = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == grid.size()) {
    std::ostringstream msg;
    msg << "no interior maximum in [" << grid.front() << ", " << grid.back() << "]";
    throw NumericError(NumericError::Kind::BracketNotFound, msg.str());
  }
  return {grid[best - 1], grid[best], grid[best + 1]};
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
/// Stops when the interval is below abs_tol.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double abs_tol, int max_iter = 200) {
  require(lo < hi && abs_tol > 0.0, "golden_section_max: need lo < hi and abs_tol > 0");
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && b - a > abs_tol; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 > f2 ? x1 : x2;
}

/**
 * Newton iterations on the centred-difference slope of f, refining a
 * stationary point already located to within a few h. Steps that leave
 * [lo, hi] or fail to shrink the slope are rejected.
 */
template <class F>
double polish_stationary(F&& f, double x, double lo, double hi, double h = 1e-4, int max_iter = 6) {
  auto slope = [&](double u, double& curvature) {
    const double fp = f(u + h);
    const double f0 = f(u);
    const double fm = f(u - h);
    curvature = (fp - 2.0 * f0 + fm) / (h * h);
    return (fp - fm) / (2.0 * h);
  };
  double curvature = 0.0;
  double d = slope(x, curvature);
  for (int it = 0; it < max_iter; ++it) {
    if (!(curvature < 0.0 || curvature > 0.0) || !std::isfinite(d)) break;
    const double step = -d / curvature;
    const double next = x + step;
    if (!(next > lo && next < hi)) break;
    double next_curvature = 0.0;
    const double next_d = slope(next, next_curvature);
    if (!(std::abs(next_d) < std::abs(d))) break;
    x = next;
    d = next_d;
    curvature = next_curvature;
    if (std::abs(step) < 1e-12 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace fracmol::optimize
