// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "fracmol/montecarlo.hpp"

namespace fracmol::mc {
namespace {

LinkConfig link_for(const ChannelParams& p, long n = 1000, double lambda = 0.0) {
  return {p, 5e-6, 0.5e-6, lambda, n, 2.0};
}

TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, AddressesAreIndependentAndRepeatable) {
  Stream a(42, Purpose::Presence, 7);
  Stream b(42, Purpose::Presence, 7);
  Stream c(42, Purpose::Presence, 8);
  Stream d(42, Purpose::Frames, 7);
  for (int k = 0; k < 10; ++k) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_NE(u, c.uniform());
    EXPECT_NE(u, d.uniform());
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(StableSampler, LaplaceTransform) {
  const int n = 200000;
  for (double order : {0.3, 0.5, 0.8}) {
    for (double s : {0.5, 1.0, 2.0}) {
      double sum = 0.0;
      double sum2 = 0.0;
      for (int m = 0; m < n; ++m) {
        Stream rng(3, Purpose::StableLaw, static_cast<std::uint32_t>(m));
        const double v = std::exp(-s * sample_one_sided_stable(order, rng));
        sum += v;
        sum2 += v * v;
      }
      const double mean = sum / n;
      const double se = std::sqrt((sum2 / n - mean * mean) / n);
      EXPECT_LT(std::abs(mean - std::exp(-std::pow(s, order))), 4 * se) << order << ' ' << s;
    }
  }
  Stream rng(1, Purpose::StableLaw, 0);
  EXPECT_EQ(sample_one_sided_stable(1.0, rng), 1.0);
  EXPECT_THROW(sample_one_sided_stable(1.2, rng), DomainError);
}

TEST(StableSampler, HalfOrderMatchesLevyCdf) {
  const int n = 100000;
  std::vector<double> x(n);
  for (int m = 0; m < n; ++m) {
    Stream rng(5, Purpose::StableLaw, static_cast<std::uint32_t>(m));
    x[m] = sample_one_sided_stable(0.5, rng);
  }
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (int m = 0; m < n; ++m) {
    const double f = std::erfc(1.0 / (2.0 * std::sqrt(x[m])));
    ks = std::max({ks, std::abs(f - static_cast<double>(m) / n), std::abs(f - static_cast<double>(m + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(Positions, NormalVarianceAndRadialLaw) {
  const auto p = presets::normal(3);
  const double t = 0.3;
  const double var = 2 * p.diff_coeff() * t;
  const int n = 200000;
  std::array<double, 3> s2{0, 0, 0};
  const int bins = 20;
  const boost::math::chi_squared chi(3);
  std::vector<double> counts(bins, 0.0);
  for (int m = 0; m < n; ++m) {
    Stream rng(9, Purpose::Positions, static_cast<std::uint32_t>(m));
    const auto x = sample_position(p, t, rng);
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) {
      s2[d] += x[d] * x[d];
      r2 += x[d] * x[d];
    }
    const double u = boost::math::cdf(chi, r2 / var);
    counts[std::min(bins - 1, static_cast<int>(u * bins))] += 1.0;
  }
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(s2[d] / n / var, 1.0, 0.01) << d;
  double stat = 0.0;
  const double expected = static_cast<double>(n) / bins;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  EXPECT_GT(boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), stat)), 0.01);
}

TEST(Positions, OneDimensionalLeavesOtherAxesZero) {
  Stream rng(2, Purpose::Positions, 0);
  const auto x = sample_position(presets::superdiffusion(1), 0.5, rng);
  EXPECT_EQ(x[1], 0.0);
  EXPECT_EQ(x[2], 0.0);
}

TEST(CharacteristicFunction, MatchesAnalyticOnGrid) {
  for (const auto& p : {presets::normal(1), presets::subdiffusion(1), presets::superdiffusion(1)}) {
    const double t = 0.4;
    const double ell = spreading_length(p, t);
    for (double kl : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      const double k = kl / ell;
      const auto e = estimate_characteristic_function(p, k, t, 200000, 17);
      EXPECT_LT(std::abs(e.estimate - characteristic_function(p, k, t)), 3 * e.std_error + 1e-12)
          << p.alpha() << ' ' << p.beta() << ' ' << kl;
    }
  }
}

TEST(Presence, EdgeCases) {
  auto l = link_for(presets::normal(3));
  l.degradation_rate = std::numeric_limits<double>::infinity();
  EXPECT_EQ(estimate_presence(l, 0.04, 10000, 1).estimate, 0.0);
  l = link_for(presets::normal(3));
  l.receptor_radius = 1e-12;
  EXPECT_EQ(estimate_presence(l, 0.04, 10000, 1).estimate, 0.0);
  EXPECT_THROW(estimate_presence(l, 0.04, 10, 1), DomainError);
}

TEST(Presence, NormalExample) {
  const auto l = link_for(presets::normal(3));
  const auto e = estimate_presence(l, 0.0416667, 10000000, 2024);
  EXPECT_LT(std::abs(e.estimate - 3.084e-4), 3 * e.std_error);
}

TEST(Presence, AnomalousClassesWithinThreeSigma) {
  for (const auto& p : {presets::subdiffusion(2), presets::superdiffusion(2)}) {
    const auto l = link_for(p, 1000, 0.5);
    const double t = peak_time(l);
    const auto e = estimate_presence(l, t, 2000000, 99);
    EXPECT_LT(std::abs(e.estimate - presence_probability(l, t)), 3 * e.std_error) << p.alpha();
  }
}

TEST(Presence, StandardErrorShrinksLikeRootN) {
  const auto l = link_for(presets::superdiffusion(2));
  const double t = peak_time(l);
  const auto a = estimate_presence(l, t, 500000, 4);
  const auto b = estimate_presence(l, t, 1000000, 4);
  const double ratio = b.std_error / a.std_error;
  EXPECT_GT(ratio, 0.65);
  EXPECT_LT(ratio, 0.77);
}

TEST(SimulateBer, AllZeroFramesNeverErr) {
  const auto l = link_for(presets::normal(3), 100);
  for (const auto& e : simulate_ber(l, {0, 0, 0}, 0.04, {1.0}, 500, 3)) EXPECT_EQ(e.errors, 0u);
}

TEST(SimulateBer, SingleIntervalMissRate) {
  const auto l = link_for(presets::normal(3), 2000);
  const double t = 0.0416667;
  const auto e = simulate_ber(l, {1}, t, {1.0}, 20000, 8).front();
  const double expected = std::pow(1.0 - presence_probability(l, t), 2000);
  EXPECT_LT(std::abs(e.rate - expected), 3 * e.std_error);
}

TEST(SimulateBer, MultiIntervalWithDegradation) {
  // super, lambda = 1, N = 1e4: half miss (bit 4 = 1) plus half false alarm (bit 4 = 0)
  const auto l = link_for(presets::superdiffusion(2), 10000, 1.0);
  const double t = peak_time(l);
  const auto m = count_means(l, all_ones_frame(4, t));
  const double g = ml_threshold(m.mu0, m.mu1);
  const std::size_t trials = 4000;
  const auto miss = simulate_ber(l, {1, 1, 1, 1}, t, {g}, trials, 21, std::vector<int>{4}).front();
  const auto fa = simulate_ber(l, {1, 1, 1, 0}, t, {g}, trials, 22, std::vector<int>{4}).front();
  const double rate = 0.5 * (miss.rate + fa.rate);
  const double se = 0.5 * std::hypot(miss.std_error, fa.std_error);
  EXPECT_LT(std::abs(rate - ber_mbit_from_means(m.mu0, m.mu1, g)), 3 * se);
}

TEST(SimulateBer, RejectsBadInput) {
  const auto l = link_for(presets::normal(3), 10);
  EXPECT_THROW(simulate_ber(l, {}, 0.04, {1.0}, 10, 1), DomainError);
  EXPECT_THROW(simulate_ber(l, {1, 0}, 0.04, {1.0, 2.0, 3.0}, 10, 1), DomainError);
  EXPECT_THROW(simulate_ber(l, {1, 0}, 0.04, {1.0}, 10, 1, std::vector<int>{3}), DomainError);
}

TEST(RandomIsi, FixedHistoryLimit) {
  const auto l = link_for(presets::superdiffusion(2), 1000, 0.0);
  const double t = peak_time(l);
  const auto first = ber_mbit_random_isi(l, 1, t, 100, 5);
  const auto m = count_means(l, all_ones_frame(1, t));
  EXPECT_NEAR(first.estimate, ber_mbit_from_means(m.mu0, m.mu1, 1.0), 1e-15);
  EXPECT_LT(first.std_error, 1e-8);
  const auto later = ber_mbit_random_isi(l, 6, t, 2000, 5);
  EXPECT_GT(later.estimate, first.estimate);
}

class ThreadCountGuard {
 public:
  ThreadCountGuard() {
    if (const char* v = std::getenv("FRACMOL_THREADS")) saved_ = v;
  }
  ~ThreadCountGuard() {
    if (saved_.empty()) unsetenv("FRACMOL_THREADS");
    else setenv("FRACMOL_THREADS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

TEST(Determinism, IndependentOfThreadCount) {
  ThreadCountGuard guard;
  const auto l = link_for(presets::subdiffusion(2), 300, 0.2);
  const double t = peak_time(l);
  auto run = [&] {
    std::vector<double> out;
    out.push_back(estimate_presence(l, t, 300000, 77).estimate);
    out.push_back(estimate_characteristic_function(l.channel, 1e5, t, 300000, 77).estimate);
    for (const auto& e : simulate_ber(l, {1, 0, 1, 1}, t, {2.0}, 300, 77)) out.push_back(e.rate);
    out.push_back(ber_mbit_random_isi(l, 5, t, 1000, 77).estimate);
    return out;
  };
  setenv("FRACMOL_THREADS", "1", 1);
  const auto one = run();
  setenv("FRACMOL_THREADS", "8", 1);
  const auto eight = run();
  EXPECT_EQ(one, eight);
}

}  // namespace
}  // namespace fracmol::mc
