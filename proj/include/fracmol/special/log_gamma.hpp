// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace fracmol::special {

namespace detail {

// log(sin(w)) without overflow for large |Im w|.
inline std::complex<double> log_sin(std::complex<double> w) {
  using namespace std::complex_literals;
  const double half_pi = 0.5 * std::numbers::pi;
  if (w.imag() > 0.0) {
    return -1.0i * w + std::complex<double>(-std::numbers::ln2, half_pi) +
           std::log(1.0 - std::exp(2.0i * w));
  }
  return 1.0i * w + std::complex<double>(-std::numbers::ln2, -half_pi) +
         std::log(1.0 - std::exp(-2.0i * w));
}

// Stirling series for |z| >= 10, Re z > 0.
inline std::complex<double> log_gamma_stirling(std::complex<double> z) {
  // B_{2k} / (2k (2k-1)), k = 1..8
  constexpr double c[] = {1.0 / 12.0,       -1.0 / 360.0,     1.0 / 1260.0,
                          -1.0 / 1680.0,    1.0 / 1188.0,     -691.0 / 360360.0,
                          1.0 / 156.0,      -3617.0 / 122400.0};
  const std::complex<double> w = 1.0 / (z * z);
  std::complex<double> series = c[7];
  for (int k = 6; k >= 0; --k) series = c[k] + w * series;
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series / z;
}

}  // namespace detail

/// Complex log-gamma. The imaginary part is correct modulo 2*pi, which is all
/// that matters once the result is exponentiated.
inline std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::log(std::numbers::pi) - detail::log_sin(std::numbers::pi * z) -
           log_gamma(1.0 - z);
  }
  std::complex<double> product = 1.0;
  while (std::abs(z) < 10.0) {
    product *= z;
    z += 1.0;
  }
  return detail::log_gamma_stirling(z) - std::log(product);
}

}  // namespace fracmol::special
