// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracmol/error.hpp"

namespace fracmol::special {

/// Gamma(n, mu) / (n-1)!, i.e. P(Y <= n-1) for Y ~ Poisson(mu). Only integer
/// orders are accepted.
inline double reg_upper_gamma(long n, double mu) {
  fracmol::require(n >= 1, "reg_upper_gamma: order n must be >= 1");
  fracmol::require(mu >= 0.0 && !std::isnan(mu), "reg_upper_gamma: mu must be nonnegative");
  if (mu == 0.0) return 1.0;
  if (std::isinf(mu)) return 0.0;
  return boost::math::gamma_q(static_cast<double>(n), mu);
}

/// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double x, double a, double b) {
  fracmol::require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
  fracmol::require(a > 0.0 && b > 0.0, "reg_inc_beta: a and b must be positive");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

/// 1 - I_x(a, b) = I_{1-x}(b, a), evaluated without forming 1 - x.
inline double reg_inc_beta_complement(double x, double a, double b) {
  fracmol::require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
  fracmol::require(a > 0.0 && b > 0.0, "reg_inc_beta: a and b must be positive");
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  return boost::math::ibetac(a, b, x);
}

}  // namespace fracmol::special
