// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracmol/channel.hpp"
#include "fracmol/special.hpp"

namespace fracmol::special {
namespace {

using Kind = NumericError::Kind;

template <class F>
Kind kind_of(F&& f) {
  try {
    f();
  } catch (const NumericError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no NumericError thrown";
  return Kind::ConsistencyCheck;
}

// erfc by its Maclaurin series; only for small arguments.
double erfc_series(double x) {
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 1.0 - 2.0 / std::sqrt(std::numbers::pi) * sum;
}

double poisson_cdf_by_sum(long n, double mu) {
  double term = std::exp(-mu);
  double sum = term;
  for (long j = 1; j < n; ++j) {
    term *= mu / j;
    sum += term;
  }
  return sum;
}

TEST(LogGamma, MatchesStdOnRealAxis) {
  for (double x : {0.3, 1.0, 1.7, 5.5, 12.3, 40.0}) {
    EXPECT_NEAR(log_gamma({x, 0.0}).real(), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
  }
}

TEST(LogGamma, ReflectionForNegativeRealPart) {
  // |Gamma(-2.5)| = 0.9453087205...
  EXPECT_NEAR(log_gamma({-2.5, 0.0}).real(), std::log(0.94530872048294188), 1e-12);
}

TEST(LogGamma, RecurrenceOffAxis) {
  const std::complex<double> s(0.7, 13.0);
  const auto lhs = log_gamma(s + 1.0);
  const auto rhs = log_gamma(s) + std::log(s);
  EXPECT_NEAR(lhs.real(), rhs.real(), 1e-11);
  EXPECT_NEAR(std::remainder(lhs.imag() - rhs.imag(), 2 * std::numbers::pi), 0.0, 1e-11);
}

TEST(GaussLegendre, ExactForPolynomials) {
  const GaussLegendreRule rule(8);
  EXPECT_NEAR(rule.integrate([](double x) { return std::pow(x, 15); }, 0.0, 1.0), 1.0 / 16, 1e-15);
  EXPECT_NEAR(rule.integrate([](double x) { return std::cos(x); }, 0.0, 1.0), std::sin(1.0), 1e-15);
}

TEST(FoxH, ExponentialReductionNearZero) {
  const HFunctionSpec e(1, 0, {}, {{0.0, 1.0}});
  EXPECT_NEAR(foxh_eval(e, 1e-8), std::exp(-1e-8), 1e-12);
  EXPECT_NEAR(foxh_eval(e, 2.0), std::exp(-2.0), 1e-12);
}

TEST(FoxH, ShiftedScaledExponential) {
  const HFunctionSpec h(1, 0, {}, {{1.5, 0.5}});
  EXPECT_NEAR(foxh_eval(h, 1.0), 2.0 * std::exp(-1.0), 1e-10);
}

TEST(FoxH, MatchesResidueClosedFormOverGrid) {
  struct Case {
    double b, big_b;
  };
  for (const Case c : {Case{0.0, 1.0}, Case{1.5, 0.5}, Case{0.3, 0.7}, Case{2.0, 1.3}, Case{0.5, 0.25}}) {
    const HFunctionSpec h(1, 0, {}, {{c.b, c.big_b}});
    for (double z = 0.01; z <= 10.0; z *= 1.25) {
      const double exact = std::pow(z, c.b / c.big_b) * std::exp(-std::pow(z, 1.0 / c.big_b)) / c.big_b;
      EXPECT_NEAR(foxh_eval(h, z), exact, 1e-8 * std::max(1.0, exact)) << "b=" << c.b << " B=" << c.big_b << " z=" << z;
    }
  }
}

TEST(FoxH, PropagatorKernelEqualsGaussianAtUnitArgument) {
  // omega(r, t) at z = 1: r = 2 sqrt(K t).
  const double K = 1e-10;
  const double t = 0.05;
  const double r = 2.0 * std::sqrt(K * t);
  const auto spec = propagator_kernel(2.0, 1.0, 3);
  const double omega = foxh_eval(spec, 1.0) / (2.0 * std::pow(r * std::sqrt(std::numbers::pi), 3));
  EXPECT_NEAR(omega / gaussian_pdf(K, 3, r, t), 1.0, 1e-8);
}

TEST(FoxH, ReducedAndFullKernelsAgree) {
  const HFunctionSpec full(2, 1, {{1.0, 0.5}, {1.0, 0.25}}, {{1.0, 0.5}, {1.5, 0.5}, {1.0, 0.5}});
  const auto reduced = propagator_kernel(2.0, 0.5, 3);
  for (double z : {0.05, 0.5, 1.0, 2.0, 4.0}) {
    const double a = foxh_eval(full, z);
    EXPECT_NEAR(foxh_eval(reduced, z) / a, 1.0, 1e-10) << z;
  }
}

TEST(FoxH, KernelZeroDoesNotTrapContour) {
  // h = 2 z^3 exp(-z^2), so -z h'(z) / h(z) = 2 z^2 - 3
  const HFunctionSpec h(2, 0, {{1.0, 0.5}}, {{1.0, 0.5}, {1.5, 0.5}});
  const HFunctionSpec d(3, 0, {{1.0, 0.5}, {0.0, 1.0}}, {{1.0, 0.5}, {1.5, 0.5}, {1.0, 1.0}});
  for (double z : {2.0, 8.0, 15.0}) EXPECT_NEAR(foxh_eval(d, z) / foxh_eval(h, z), 2 * z * z - 3, 1e-8 * z * z) << z;
}

TEST(FoxH, ErrorEstimateWithinTolerance) {
  const auto v = foxh_integrate(propagator_kernel(1.8, 1.0, 3), 0.7);
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * v.magnitude;
  EXPECT_LE(v.error_estimate, std::max(1e-12 * std::abs(v.value), rounding));
  EXPECT_LT(v.error_estimate, 1e-10 * std::abs(v.value));
}

TEST(FoxH, RejectsDivergentIntegral) {
  const HFunctionSpec h(1, 0, {{0.0, 1.0}}, {{0.0, 1.0}});
  EXPECT_EQ(kind_of([&] { foxh_eval(h, 1.0); }), Kind::NonConvergent);
}

TEST(FoxH, RejectsSharedPole) {
  EXPECT_EQ(kind_of([] { HFunctionSpec(1, 1, {{1.0, 1.0}}, {{0.0, 1.0}}); }), Kind::PoleCollision);
}

TEST(FoxH, RejectsInterleavedFamilies) {
  EXPECT_EQ(kind_of([] { HFunctionSpec(1, 1, {{2.5, 1.0}}, {{1.0, 1.0}}); }), Kind::NoSeparatingLine);
}

TEST(FoxH, ReportsTruncationBelowTolerance) {
  const HFunctionSpec slow(1, 0, {}, {{0.0, 0.05}});
  QuadratureConfig cfg;
  cfg.max_contour_halflength = 10.0;
  EXPECT_EQ(kind_of([&] { foxh_integrate(slow, 1.0, cfg); }), Kind::ToleranceNotMet);
}

TEST(FoxH, RejectsBadArguments) {
  const HFunctionSpec e(1, 0, {}, {{0.0, 1.0}});
  EXPECT_THROW(foxh_eval(e, 0.0), DomainError);
  EXPECT_THROW(foxh_eval(e, -1.0), DomainError);
  EXPECT_THROW(HFunctionSpec(2, 0, {}, {{0.0, 1.0}}), DomainError);
  EXPECT_THROW(HFunctionSpec(1, 0, {}, {{0.0, 0.0}}), DomainError);
  QuadratureConfig cfg;
  cfg.rel_tol = 0.0;
  EXPECT_THROW(foxh_eval(e, 1.0, cfg), DomainError);
}

TEST(MittagLeffler, Examples) {
  EXPECT_NEAR(mittag_leffler(1.0, 1.0), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(mittag_leffler(0.5, 1.0), std::exp(1.0) * erfc_series(1.0), 1e-10);
  EXPECT_NEAR(mittag_leffler(0.5, 1.0), 0.427583576155807, 1e-10);
  for (double b : {0.2, 0.5, 0.9, 1.0}) EXPECT_EQ(mittag_leffler(b, 0.0), 1.0);
}

TEST(MittagLeffler, HalfOrderClosedFormOverRange) {
  for (double x = 0.0; x <= 20.0; x += 0.37) {
    const double exact = x < 2.0 ? std::exp(x * x) * erfc_series(x) : std::exp(x * x) * std::erfc(x);
    EXPECT_NEAR(mittag_leffler(0.5, x), exact, 1e-10) << x;
  }
}

TEST(MittagLeffler, SeriesAndIntegralAgreeAtSwitchover) {
  for (double b : {0.3, 0.5, 0.75, 0.95}) {
    for (double x : {0.6, 0.9, 1.0, 1.2}) {
      EXPECT_NEAR(detail::mittag_leffler_series(b, x), detail::mittag_leffler_integral(b, x), 1e-10) << b << ' ' << x;
    }
  }
}

TEST(MittagLeffler, CompletelyMonotoneOnGrid) {
  for (double b : {0.3, 0.5, 0.8}) {
    double prev2 = mittag_leffler(b, 0.0);
    double prev1 = mittag_leffler(b, 0.5);
    EXPECT_LT(prev1, prev2);
    for (double x = 1.0; x <= 50.0; x += 0.5) {
      const double cur = mittag_leffler(b, x);
      EXPECT_LT(cur, prev1) << b << ' ' << x;
      EXPECT_GT(cur - 2 * prev1 + prev2, 0.0) << b << ' ' << x;
      prev2 = prev1;
      prev1 = cur;
    }
  }
}

TEST(MittagLeffler, RejectsOrderOutsideUnitInterval) {
  EXPECT_THROW(mittag_leffler(0.0, 1.0), DomainError);
  EXPECT_THROW(mittag_leffler(1.5, 1.0), DomainError);
  EXPECT_THROW(mittag_leffler(0.5, -1.0), DomainError);
}

TEST(IncompleteGamma, Examples) {
  EXPECT_NEAR(reg_upper_gamma(1, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(reg_upper_gamma(14, 10.0), 0.864464, 1e-6);
  EXPECT_NEAR(reg_upper_gamma(14, 20.0), 0.066128, 1e-6);
  EXPECT_NEAR(reg_upper_gamma(14, 10.0), poisson_cdf_by_sum(14, 10.0), 1e-14);
  EXPECT_NEAR(reg_upper_gamma(37, 31.5), poisson_cdf_by_sum(37, 31.5), 1e-13);
}

TEST(IncompleteGamma, MonotoneInBothArguments) {
  for (long n = 1; n < 40; n += 3) {
    double prev = 1.0;
    for (double mu = 0.0; mu < 60.0; mu += 0.7) {
      const double v = reg_upper_gamma(n, mu);
      EXPECT_LE(v, prev);
      EXPECT_GE(reg_upper_gamma(n + 1, mu), v);
      prev = v;
    }
  }
  EXPECT_THROW(reg_upper_gamma(0, 1.0), DomainError);
}

TEST(IncompleteBeta, Examples) {
  EXPECT_EQ(reg_inc_beta(0.0, 2.0, 3.0), 0.0);
  EXPECT_EQ(reg_inc_beta(1.0, 2.0, 3.0), 1.0);
  EXPECT_NEAR(reg_inc_beta(0.5, 6.0, 5.0), 386.0 / 1024.0, 1e-15);
}

TEST(IncompleteBeta, ReflectionOnRandomGrid) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  std::uniform_real_distribution<double> ab(0.1, 40.0);
  for (int k = 0; k < 100; ++k) {
    const double xv = x(gen);
    const double a = ab(gen);
    const double b = ab(gen);
    EXPECT_NEAR(reg_inc_beta(xv, a, b), 1.0 - reg_inc_beta(1.0 - xv, b, a), 1e-12);
    EXPECT_NEAR(reg_inc_beta_complement(xv, a, b), reg_inc_beta(1.0 - xv, b, a), 1e-12);
  }
}

}  // namespace
}  // namespace fracmol::special
