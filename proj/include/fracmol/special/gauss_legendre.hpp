// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace fracmol::special {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }

  /// Integrates f over [a, b].
  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    decltype(f(mid)) sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += weights[i] * f(mid + half * nodes[i]);
    }
    return half * sum;
  }
};

}  // namespace fracmol::special
