// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fracmol/reception.hpp"

namespace fracmol {
namespace {

LinkConfig link_for(const ChannelParams& p, double lambda = 0.0) { return {p, 5e-6, 0.5e-6, lambda, 100000, 2.0}; }

TEST(LinkConfig, Validation) {
  EXPECT_NO_THROW(link_for(presets::normal()).validate());
  auto l = link_for(presets::normal());
  l.receptor_radius = 1.1e-6;
  EXPECT_THROW(l.validate(), DomainError);
  l = link_for(presets::normal());
  l.degradation_rate = -1.0;
  EXPECT_THROW(l.validate(), DomainError);
  l = link_for(presets::normal());
  l.molecules = -1;
  EXPECT_THROW(l.validate(), DomainError);
  l = link_for(presets::normal());
  l.bit_interval = 0.0;
  EXPECT_THROW(l.validate(), DomainError);
}

TEST(ReceptorVolume, Examples) {
  EXPECT_NEAR(receptor_volume(3, 0.5e-6), 5.23599e-19, 1e-24);
  EXPECT_DOUBLE_EQ(receptor_volume(1, 0.5e-6), 1e-6);
  EXPECT_DOUBLE_EQ(receptor_volume(2, 1.0), std::numbers::pi);
  EXPECT_THROW(receptor_volume(4, 1.0), DomainError);
  EXPECT_THROW(receptor_volume(3, 0.0), DomainError);
}

TEST(Presence, NormalExampleNearPeak) {
  const auto l = link_for(presets::normal(3));
  EXPECT_NEAR(presence_probability(l, 0.0416667), 3.084e-4, 0.001e-4);
  EXPECT_NEAR(expected_observed(l, 0.0416667), 30.8, 0.05);
}

TEST(Presence, VanishesAtEarlyTimes) {
  for (const auto& p : {presets::normal(3), presets::subdiffusion(3), presets::superdiffusion(3)}) {
    const auto l = link_for(p);
    EXPECT_LT(presence_probability(l, 1e-9), 1e-6 * presence_probability(l, peak_time(l)));
  }
  EXPECT_EQ(presence_probability(link_for(presets::normal(3)), 1e-6), 0.0);
}

TEST(Presence, SurvivalFactorization) {
  for (const auto& p : {presets::normal(2), presets::subdiffusion(3), presets::superdiffusion(1)}) {
    for (double t : {0.01, 0.3, 1.7}) {
      const double p0 = presence_probability(link_for(p, 0.0), t);
      EXPECT_NEAR(presence_probability(link_for(p, 2.0), t), p0 * std::exp(-2.0 * t), 1e-13 * p0);
    }
  }
}

TEST(Presence, NoClampAtLargestAllowedReceptor) {
  for (const auto& p : {presets::normal(1), presets::subdiffusion(1), ChannelParams(1.0, 0.2, 1e-10, 1)}) {
    auto l = link_for(p);
    l.receptor_radius = l.distance / 5;
    const auto pr = presence(l, peak_time(l));
    EXPECT_FALSE(pr.clamped);
    EXPECT_LT(pr.probability, 0.5);
  }
}

TEST(ExpectedObserved, LinearInN) {
  auto l = link_for(presets::superdiffusion(3));
  l.molecules = 0;
  for (double t : {0.01, 0.5, 3.0}) EXPECT_EQ(expected_observed(l, t), 0.0);
  l.degradation_rate = std::numeric_limits<double>::infinity();
  l.molecules = 1000;
  EXPECT_EQ(expected_observed(l, 0.5), 0.0);
}

TEST(PeakTime, NormalClosedFormAllDims) {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto l = link_for(presets::normal(dim));
    const double tp = peak_time(l);
    EXPECT_NEAR(tp / normal_peak_time(l), 1.0, 1e-4) << dim;
  }
  EXPECT_NEAR(peak_time(link_for(presets::normal(3))), 0.0417, 0.0417 * 0.005);
}

TEST(PeakTime, Examples) {
  EXPECT_NEAR(peak_time(link_for(presets::subdiffusion(3))), 0.0021, 0.0021 * 0.05);
  EXPECT_NEAR(peak_time(link_for(presets::superdiffusion(3))), 0.6287, 0.6287 * 0.02);
  EXPECT_NEAR(peak_time(link_for(presets::superdiffusion(3), 1.0)), 0.4824, 0.4824 * 0.02);
  EXPECT_NEAR(peak_time(link_for(presets::superdiffusion(3), 2.0)), 0.4099, 0.4099 * 0.02);
}

TEST(PeakTime, StrongDegradationNormalClosedForm) {
  // root of lambda t^2 + (dim/2) t - a^2 / (4K)
  for (double lambda : {1e2, 1e4, 1e6}) {
    const auto l = link_for(presets::normal(3), lambda);
    const double q = 25e-12 / (4 * 1e-10);
    const double expected = (-1.5 + std::sqrt(2.25 + 4 * lambda * q)) / (2 * lambda);
    const auto r = peak_time_detail(l);
    EXPECT_NEAR(r.time / expected, 1.0, 1e-5) << lambda;
    EXPECT_LT(std::abs(r.relative_residual), 1e-6) << lambda;
  }
}

TEST(PeakTime, UnderflowEverywhereIsReported) {
  try {
    peak_time_detail(link_for(presets::normal(3), 1e8));
    FAIL() << "expected BracketNotFound";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.kind(), NumericError::Kind::BracketNotFound);
  }
}

TEST(PeakTime, ResultCarriesSmallResidual) {
  const auto r = peak_time_detail(link_for(presets::superdiffusion(2), 1.0));
  EXPECT_LT(std::abs(r.relative_residual), 1e-6);
  EXPECT_LT(r.bracket_lo, r.time);
  EXPECT_GT(r.bracket_hi, r.time);
  EXPECT_NEAR(r.presence, presence_probability(link_for(presets::superdiffusion(2), 1.0), r.time), 1e-18);
}

TEST(PeakTime, UnimodalOnLogGrid) {
  for (const auto& p : {presets::normal(3), presets::subdiffusion(2), presets::superdiffusion(3)}) {
    const auto l = link_for(p, 0.5);
    const double tp = peak_time(l);
    std::vector<double> v;
    for (int k = 0; k < 200; ++k) v.push_back(expected_observed(l, tp / 100.0 * std::pow(1e4, k / 199.0)));
    std::size_t arg = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
      if (v[k] > v[arg]) arg = k;
    }
    for (std::size_t k = 1; k <= arg; ++k) EXPECT_GE(v[k], v[k - 1]) << k;
    for (std::size_t k = arg + 1; k < v.size(); ++k) EXPECT_LE(v[k], v[k - 1]) << k;
  }
}

TEST(PeakTime, DerivativeVanishesAtPeak) {
  for (const auto& p : {presets::normal(3), presets::subdiffusion(3), presets::superdiffusion(3)}) {
    const auto l = link_for(p, 1.0);
    const double tp = peak_time(l);
    const double h = 1e-4 * tp;
    const double slope = (expected_observed(l, tp + h) - expected_observed(l, tp - h)) / (2 * h);
    EXPECT_LT(std::abs(slope), 1e-6 * expected_observed(l, tp) / tp);
  }
}

TEST(PeakTime, MonotoneInDegradation) {
  const auto p = presets::superdiffusion(3);
  double prev_tp = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double tp = peak_time(link_for(p, lambda));
    EXPECT_LE(tp, prev_tp);
    prev_tp = tp;
  }
  for (double t : {0.1, 0.6, 2.0}) {
    EXPECT_GT(expected_observed(link_for(p, 0.5), t), expected_observed(link_for(p, 1.0), t));
  }
}

TEST(PeakTime, MissingBracketIsReported) {
  PeakOptions narrow;
  narrow.scan_min_exponent = 5;
  narrow.scan_max_exponent = 9;
  try {
    peak_time_detail(link_for(presets::normal(3)), narrow);
    FAIL() << "expected BracketNotFound";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.kind(), NumericError::Kind::BracketNotFound);
  }
}

TEST(PeakCondition, VanishesAtNormalClosedForm) {
  const auto l = link_for(presets::normal(3));
  EXPECT_LT(std::abs(theorem1_relative_residual(l, 25e-12 / (6 * 1e-10))), 1e-3);
}

TEST(PeakCondition, RightKernelMatchesPropagator) {
  // rhs = beta (a sqrt(pi))^dim omega(a, t)
  for (const auto& p : {presets::normal(2), presets::subdiffusion(3), presets::superdiffusion(1)}) {
    const auto l = link_for(p);
    for (double t : {0.01, 0.2, 1.0}) {
      const auto terms = theorem1_terms(l, t);
      const double expect = p.beta() * std::pow(l.distance * std::sqrt(std::numbers::pi), p.dim()) *
                            propagator_pdf(p, l.distance, t);
      EXPECT_NEAR(terms.rhs / expect, 1.0, 1e-9);
    }
  }
}

TEST(PeakCondition, RelativeResidualIsLogSlope) {
  const auto l = link_for(presets::subdiffusion(2), 1.0);
  for (double t : {0.001, 0.004, 0.02}) {
    const double h = 1e-4;
    const double slope =
        (std::log(expected_observed(l, t * std::exp(h))) - std::log(expected_observed(l, t * std::exp(-h)))) / (2 * h);
    EXPECT_NEAR(theorem1_relative_residual(l, t), slope, 1e-6);
  }
}

TEST(PeakCondition, GaussianLogSlopeAtEarlyTimes) {
  // t d ln omega / dt = a^2 / (4 K t) - dim / 2
  const auto l = link_for(presets::normal(3));
  for (double t : {1e-3, 3e-4, 1e-4}) {
    EXPECT_NEAR(theorem1_relative_residual(l, t) / (25e-12 / (4e-10 * t) - 1.5), 1.0, 1e-9) << t;
  }
}

TEST(PeakCondition, SignChangesAcrossPeak) {
  for (const auto& p : {presets::normal(3), presets::subdiffusion(3), presets::superdiffusion(3)}) {
    for (double lambda : {0.0, 1.0, 2.0}) {
      const auto l = link_for(p, lambda);
      const double tp = peak_time(l);
      EXPECT_GT(theorem1_residual(l, tp / 10), 0.0);
      EXPECT_LT(theorem1_residual(l, tp * 10), 0.0);
    }
  }
}

}  // namespace
}  // namespace fracmol
