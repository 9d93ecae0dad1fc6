// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracmol/error.hpp"

namespace fracmol::special {

namespace detail {

// sum_k (-x)^k / Gamma(beta k + 1); fine for x below a few units.
inline double mittag_leffler_series(double beta, double x) {
  double sum = 1.0;
  const double log_x = std::log(x);
  for (int k = 1; k < 100000; ++k) {
    const double log_term = k * log_x - std::lgamma(beta * k + 1.0);
    const double term = std::exp(log_term);
    sum += (k % 2 == 1) ? -term : term;
    if (term < 1e-18 && beta * k > 2.0 && k > x) break;
  }
  return sum;
}

// E_beta(-x) = sin(beta pi)/(beta pi) * int_0^inf exp(-v^{1/beta}) x / (v^2 + 2 v x cos(beta pi) + x^2) dv,
// the Laplace-type representation with the v^{beta-1} endpoint singularity
// removed by substitution. Valid for 0 < beta < 1 and x > 0.
inline double mittag_leffler_integral(double beta, double x) {
  using boost::math::quadrature::gauss_kronrod;
  const double cos_bp = std::cos(beta * std::numbers::pi);
  const double sin_bp = std::sin(beta * std::numbers::pi);
  auto f = [&](double v) {
    if (v <= 0.0) return 1.0 / x;
    return std::exp(-std::pow(v, 1.0 / beta)) * x / (v * v + 2.0 * v * x * cos_bp + x * x);
  };
  // exp(-v^{1/beta}) < 1e-320 past this point
  const double v_end = std::pow(740.0, beta);
  // denominator minimum (integrand peak) sits at -x cos(beta pi) when beta > 1/2
  const double v_peak = std::max(0.0, -x * cos_bp);
  double total = 0.0;
  auto piece = [&](double a, double b) {
    if (b <= a) return 0.0;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14);
  };
  if (v_peak > 0.0 && v_peak < v_end) {
    const double w = std::max(x * sin_bp, 1e-12);
    const double a = std::max(0.0, v_peak - w);
    const double b = std::min(v_end, v_peak + w);
    total = piece(0.0, a) + piece(a, v_peak) + piece(v_peak, b) + piece(b, v_end);
  } else {
    total = piece(0.0, std::min(1.0, v_end)) + piece(std::min(1.0, v_end), v_end);
  }
  return sin_bp / (beta * std::numbers::pi) * total;
}

}  // namespace detail

/// Argument below which the power series is used.
inline constexpr double kMittagLefflerSeriesLimit = 1.0;

/// E_beta(-x) for 0 < beta <= 1 and x >= 0.
inline double mittag_leffler(double beta, double x) {
  fracmol::require(beta > 0.0 && beta <= 1.0, "mittag_leffler: beta must lie in (0, 1]");
  fracmol::require(x >= 0.0 && !std::isnan(x), "mittag_leffler: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(-x);
  if (std::isinf(x)) return 0.0;
  if (x < kMittagLefflerSeriesLimit) return detail::mittag_leffler_series(beta, x);
  return detail::mittag_leffler_integral(beta, x);
}

}  // namespace fracmol::special
