// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "fracmol/channel.hpp"
#include "fracmol/detection.hpp"
#include "fracmol/error.hpp"
#include "fracmol/mc/philox.hpp"
#include "fracmol/parallel.hpp"
#include "fracmol/reception.hpp"

namespace fracmol::mc {

/**
 * One-sided stable draw with E[exp(-s D)] = exp(-s^order), 0 < order <= 1,
 * by Kanter's representation
 *
 *   D = sin(a U) / sin(U)^{1/a} * (sin((1 - a) U) / W)^{(1 - a)/a},
 *
 * U uniform on (0, pi), W standard exponential. order = 1 gives D = 1.
 */
inline double sample_one_sided_stable(double order, Stream& rng) {
  require(order > 0.0 && order <= 1.0, "sample_one_sided_stable: order must lie in (0, 1]");
  if (order == 1.0) return 1.0;
  const double a = order;
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double log_d = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                       (1.0 - a) / a * (std::log(std::sin((1.0 - a) * u)) - std::log(w));
  return std::exp(log_d);
}

/// Operational time E = (t / D)^beta of the inverse beta-stable clock at t.
inline double sample_operational_time(double beta, double t, Stream& rng) {
  if (beta == 1.0) return t;
  return std::pow(t / sample_one_sided_stable(beta, rng), beta);
}

/// Scale sqrt(2 S) (K u)^{1/alpha} of the Gaussian mixture giving an
/// isotropic alpha-stable vector at operational time u.
inline double sample_mixture_scale(const ChannelParams& p, double u, Stream& rng) {
  const double s = p.alpha() == 2.0 ? 1.0 : sample_one_sided_stable(0.5 * p.alpha(), rng);
  return std::sqrt(2.0 * s) * std::pow(p.diff_coeff() * u, 1.0 / p.alpha());
}

/// Displacement at time t of a molecule released at the origin; unused
/// coordinates are zero.
inline std::array<double, 3> sample_position(const ChannelParams& p, double t, Stream& rng) {
  require(t > 0.0, "sample_position: t must be positive");
  const double u = sample_operational_time(p.beta(), t, rng);
  const double scale = sample_mixture_scale(p, u, rng);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < p.dim(); ++d) x[d] = scale * rng.normal();
  return x;
}

namespace detail {

// Whether a molecule released at time 0 is alive and inside the ball of
// radius rho centred at distance a along the first axis at elapsed time t.
// Draws stop as soon as the outcome is decided; each molecule owns its
// stream, so this does not disturb any other draw.
inline bool observed(const LinkConfig& link, double t, Stream& rng) {
  if (link.degradation_rate > 0.0) {
    if (std::isinf(link.degradation_rate)) return false;
    if (rng.exponential() / link.degradation_rate <= t) return false;
  }
  const auto& p = link.channel;
  const double u = sample_operational_time(p.beta(), t, rng);
  const double scale = sample_mixture_scale(p, u, rng);
  const double rho2 = link.receptor_radius * link.receptor_radius;
  const double dx = scale * rng.normal() - link.distance;
  double d2 = dx * dx;
  for (int d = 1; d < p.dim() && d2 < rho2; ++d) {
    const double y = scale * rng.normal();
    d2 += y * y;
  }
  return d2 < rho2;
}

inline constexpr std::size_t kBlock = 1u << 16;

}  // namespace detail

struct Estimate {
  double estimate;
  double std_error;
  std::size_t samples;
};

/// Fraction of n simulated molecules alive inside the receptor at time t.
inline Estimate estimate_presence(const LinkConfig& link, double t, std::size_t n,
                                  std::uint64_t seed) {
  link.validate();
  require(t > 0.0, "estimate_presence: t must be positive");
  require(n >= 1000, "estimate_presence: need at least 1000 molecules");
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  std::vector<std::size_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * detail::kBlock);
    std::size_t h = 0;
    for (std::size_t m = b * detail::kBlock; m < end; ++m) {
      Stream rng(seed, Purpose::Presence, static_cast<std::uint32_t>(m),
                 static_cast<std::uint32_t>(std::uint64_t{m} >> 32));
      if (detail::observed(link, t, rng)) ++h;
    }
    hits[b] = h;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

/// Sample mean of cos(k X_1(t)); its expectation is characteristic_function.
inline Estimate estimate_characteristic_function(const ChannelParams& p, double k, double t,
                                                 std::size_t n, std::uint64_t seed) {
  require(k >= 0.0 && t > 0.0 && n >= 2, "estimate_characteristic_function: need k >= 0, t > 0, n >= 2");
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> squares(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * detail::kBlock);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t m = b * detail::kBlock; m < end; ++m) {
      Stream rng(seed, Purpose::CharacteristicFunction, static_cast<std::uint32_t>(m),
                 static_cast<std::uint32_t>(std::uint64_t{m} >> 32));
      const double u = sample_operational_time(p.beta(), t, rng);
      const double c = std::cos(k * sample_mixture_scale(p, u, rng) * rng.normal());
      s += c;
      s2 += c * c;
    }
    sums[b] = s;
    squares[b] = s2;
  });
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    s += sums[b];
    s2 += squares[b];
  }
  const double nd = static_cast<double>(n);
  const double mean = s / nd;
  const double var = std::max(0.0, (s2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd), n};
}

struct BitErrorEstimate {
  int bit_index;
  std::size_t errors;
  std::size_t trials;
  double rate;
  double std_error;
};

/**
 * Simulates n_trials independent frames. Each '1' bit releases N molecules
 * at its slot start; bit i is decided at (i - 1) T_b + t_o by comparing the
 * number of live molecules inside the receptor with its threshold. Every
 * (cohort, decision instant) pair gets fresh single-time positions.
 *
 * `thresholds` holds one value per bit or a single shared value. When
 * `decide` is given only those bit indices (1-based) are simulated.
 */
inline std::vector<BitErrorEstimate> simulate_ber(const LinkConfig& link, const std::vector<int>& bits,
                                                  double t_o, const std::vector<double>& thresholds,
                                                  std::size_t n_trials, std::uint64_t seed,
                                                  std::optional<std::vector<int>> decide = std::nullopt) {
  link.validate();
  const BitFrame probe{bits, 1, t_o};
  probe.validate(link.bit_interval);
  require(n_trials >= 1, "simulate_ber: need at least one trial");
  require(bits.size() < (1u << 16), "simulate_ber: frame too long");
  require(thresholds.size() == 1 || thresholds.size() == bits.size(),
          "simulate_ber: give one threshold or one per bit");
  for (double g : thresholds) require(g > 0.0, "simulate_ber: thresholds must be positive");
  std::vector<int> targets;
  if (decide) {
    targets = *decide;
    for (int i : targets) {
      require(i >= 1 && i <= static_cast<int>(bits.size()), "simulate_ber: bit index out of range");
    }
  } else {
    for (int i = 1; i <= static_cast<int>(bits.size()); ++i) targets.push_back(i);
  }
  auto threshold = [&](int i) { return thresholds.size() == 1 ? thresholds[0] : thresholds[i - 1]; };

  // errors[f * targets + k]
  std::vector<unsigned char> wrong(n_trials * targets.size(), 0);
  parallel_for(n_trials, [&](std::size_t f) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const int i = targets[k];
      long count = 0;
      for (int j = 1; j <= i; ++j) {
        if (bits[j - 1] == 0) continue;
        const double elapsed = (i - j) * link.bit_interval + t_o;
        const auto cohort = (static_cast<std::uint32_t>(i) << 16) | static_cast<std::uint32_t>(j);
        for (long m = 0; m < link.molecules; ++m) {
          Stream rng(seed, Purpose::Frames, static_cast<std::uint32_t>(m), cohort,
                     static_cast<std::uint32_t>(f));
          if (detail::observed(link, elapsed, rng)) ++count;
        }
      }
      const int decision = static_cast<double>(count) >= threshold(i) ? 1 : 0;
      wrong[f * targets.size() + k] = decision != bits[i - 1];
    }
  });
  std::vector<BitErrorEstimate> out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    std::size_t e = 0;
    for (std::size_t f = 0; f < n_trials; ++f) e += wrong[f * targets.size() + k];
    const double n = static_cast<double>(n_trials);
    const double r = static_cast<double>(e) / n;
    out.push_back({targets[k], e, n_trials, r, std::sqrt(r * (1.0 - r) / n)});
  }
  return out;
}

/**
 * Average of the analytic conditional error of bit i over interference
 * histories with i.i.d. equiprobable earlier bits. The threshold follows
 * ml_threshold per history unless `fixed_threshold` is given.
 */
inline Estimate ber_mbit_random_isi(const LinkConfig& link, int bit_index, double t_o,
                                    std::size_t n_draws, std::uint64_t seed,
                                    std::optional<double> fixed_threshold = std::nullopt) {
  link.validate();
  all_ones_frame(bit_index, t_o).validate(link.bit_interval);
  require(n_draws >= 2, "ber_mbit_random_isi: need at least two draws");
  const double n = static_cast<double>(link.molecules);
  std::vector<double> lagged(bit_index, 0.0);
  for (int lag = 0; lag < bit_index; ++lag) {
    lagged[lag] = n * presence_probability(link, lag * link.bit_interval + t_o);
  }
  std::vector<double> values(n_draws, 0.0);
  parallel_for(n_draws, [&](std::size_t d) {
    Stream rng(seed, Purpose::IsiSequences, static_cast<std::uint32_t>(d),
               static_cast<std::uint32_t>(std::uint64_t{d} >> 32));
    double mu0 = 0.0;
    for (int j = 1; j < bit_index; ++j) {
      if (rng.uniform() < 0.5) mu0 += lagged[bit_index - j];
    }
    const double mu1 = mu0 + lagged[0];
    double g = 1.0;
    if (fixed_threshold) g = *fixed_threshold;
    else if (mu1 > mu0) g = ml_threshold(mu0, mu1);
    values[d] = ber_mbit_from_means(mu0, mu1, g);
  });
  double s = 0.0;
  double s2 = 0.0;
  for (double v : values) {
    s += v;
    s2 += v * v;
  }
  const double nd = static_cast<double>(n_draws);
  const double mean = s / nd;
  const double var = std::max(0.0, (s2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd), n_draws};
}

}  // namespace fracmol::mc
