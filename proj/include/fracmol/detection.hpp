// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracmol/error.hpp"
#include "fracmol/optimize.hpp"
#include "fracmol/reception.hpp"
#include "fracmol/special.hpp"

namespace fracmol {

/// On-off keyed frame s_1..s_kappa with the bit under decision (1-based) and
/// the observation offset t_o within each slot.
struct BitFrame {
  std::vector<int> bits;
  int bit_index = 1;
  double observe_offset = 0.0;

  void validate(double bit_interval) const {
    require(!bits.empty(), "frame: bit sequence is empty");
    for (int b : bits) require(b == 0 || b == 1, "frame: bits must be 0 or 1");
    require(bit_index >= 1 && bit_index <= static_cast<int>(bits.size()),
            "frame: bit index must lie in [1, length]");
    require(observe_offset > 0.0 && observe_offset <= bit_interval,
            "frame: observation offset must lie in (0, T_b]");
  }

  std::vector<int> isi_history() const {
    return {bits.begin(), bits.begin() + (bit_index - 1)};
  }
};

/// Frame whose first i - 1 bits are all ones, deciding bit i.
inline BitFrame all_ones_frame(int bit_index, double observe_offset) {
  require(bit_index >= 1, "frame: bit index must be >= 1");
  return {std::vector<int>(bit_index, 1), bit_index, observe_offset};
}

struct DecisionRule {
  double threshold;
};

// ---------------------------------------------------------------------------
// Count distributions.

/// P(Y < threshold) for Y ~ Bin(n, p).
inline double binomial_count_cdf(long n, double p, double threshold) {
  require(n >= 0, "binomial_count_cdf: n must be nonnegative");
  require(p >= 0.0 && p <= 1.0, "binomial_count_cdf: p must lie in [0, 1]");
  require(threshold > 0.0, "binomial_count_cdf: threshold must be positive");
  const double g = std::ceil(threshold);
  if (g > static_cast<double>(n)) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return special::reg_inc_beta_complement(p, g, static_cast<double>(n) - g + 1.0);
}

/// P(Y < threshold) for Y ~ Poisson(mu), i.e. P(Y <= ceil(threshold) - 1).
inline double poisson_count_cdf(double mu, double threshold) {
  require(threshold > 0.0, "poisson_count_cdf: threshold must be positive");
  return special::reg_upper_gamma(static_cast<long>(std::ceil(threshold)), mu);
}

/// log10 P(Y < threshold) for Y ~ Bin(n, p), summed in the log domain so it
/// stays finite where the probability itself underflows. Cost grows with
/// the threshold.
inline double log10_binomial_count_cdf(long n, double p, double threshold) {
  require(n >= 0 && p >= 0.0 && p <= 1.0 && threshold > 0.0,
          "log10_binomial_count_cdf: need n >= 0, p in [0, 1], threshold > 0");
  const long g = static_cast<long>(std::ceil(threshold));
  if (g > n || p == 0.0) return 0.0;
  if (p == 1.0) return -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  std::vector<double> logs;
  for (long k = 0; k < g; ++k) {
    const double kd = static_cast<double>(k);
    logs.push_back(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
                   kd * std::log(p) + (nd - kd) * std::log1p(-p));
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double l : logs) s += std::exp(l - top);
  return (top + std::log(s)) / std::numbers::ln10;
}

// ---------------------------------------------------------------------------
// Single bit interval.

/// (1/2) P(Bin(N, P(t_o)) < threshold): the missed-detection half of the
/// error, false alarms being impossible without interference.
inline double ber_sbit(const LinkConfig& link, double t_o, double threshold) {
  link.validate();
  require(threshold > 0.0, "ber_sbit: threshold must be positive");
  const double p = presence_probability(link, t_o);
  return 0.5 * binomial_count_cdf(link.molecules, p, threshold);
}

/// ber_sbit with the binomial count replaced by Poisson(N P).
inline double ber_sbit_poisson(const LinkConfig& link, double t_o, double threshold) {
  link.validate();
  const double p = presence_probability(link, t_o);
  return 0.5 * poisson_count_cdf(static_cast<double>(link.molecules) * p, threshold);
}

/// log10 of ber_sbit.
inline double log10_ber_sbit(const LinkConfig& link, double t_o, double threshold) {
  link.validate();
  const double p = presence_probability(link, t_o);
  return std::log10(0.5) + log10_binomial_count_cdf(link.molecules, p, threshold);
}

/// Observation offset minimizing ber_sbit at the optimal threshold of one
/// molecule, where the error is (1/2)(1 - P(t_o))^N.
inline double optimal_observation_time(const LinkConfig& link, const PeakOptions& opt = {}) {
  link.validate();
  require(link.molecules > 0, "optimal_observation_time: needs N > 0");
  const double n = static_cast<double>(link.molecules);
  // -ln(2 ber) = -N ln(1 - P)
  auto g = [&](double u) { return -n * std::log1p(-presence_probability(link, std::exp(u))); };
  double lo = 0.0;
  double hi = 0.0;
  return detail::maximize_over_log_time(g, natural_time_scale(link), opt, lo, hi);
}

/// -log10(1 - P(t_o)): the decay rate of log10 ber_sbit per molecule.
inline double diversity_gain_sbit(const LinkConfig& link, double t_o) {
  const double p = presence_probability(link, t_o);
  require(p > 0.0 && p < 1.0, "diversity_gain_sbit: presence probability must lie in (0, 1)");
  return -std::log1p(-p) / std::numbers::ln10;
}

// ---------------------------------------------------------------------------
// Multiple bit intervals.

/// Mean count at the decision instant of bit i under hypothesis s_i = k,
/// summing the cohorts released by earlier '1' bits.
inline double count_mean(const LinkConfig& link, const BitFrame& frame, int hypothesis) {
  link.validate();
  frame.validate(link.bit_interval);
  require(hypothesis == 0 || hypothesis == 1, "count_mean: hypothesis must be 0 or 1");
  const double n = static_cast<double>(link.molecules);
  const int i = frame.bit_index;
  double mu = 0.0;
  for (int j = 1; j < i; ++j) {
    if (frame.bits[j - 1] == 0) continue;
    mu += n * presence_probability(link, (i - j) * link.bit_interval + frame.observe_offset);
  }
  if (hypothesis == 1) mu += n * presence_probability(link, frame.observe_offset);
  return mu;
}

struct CountMeans {
  double mu0;
  double mu1;
};

inline CountMeans count_means(const LinkConfig& link, const BitFrame& frame) {
  const double isi = count_mean(link, frame, 0);
  const double n = static_cast<double>(link.molecules);
  return {isi, isi + n * presence_probability(link, frame.observe_offset)};
}

/// (1/2)[1 - F0 + F1] with F_k = P(Y < threshold), Y ~ Poisson(mu_k).
inline double ber_mbit_from_means(double mu0, double mu1, double threshold) {
  require(mu0 >= 0.0 && mu1 >= 0.0, "ber_mbit: means must be nonnegative");
  require(threshold > 0.0, "ber_mbit: threshold must be positive");
  const double f0 = poisson_count_cdf(mu0, threshold);
  const double f1 = poisson_count_cdf(mu1, threshold);
  return 0.5 * ((1.0 - f0) + f1);
}

inline double ber_mbit(const LinkConfig& link, const BitFrame& frame, const DecisionRule& rule) {
  const auto m = count_means(link, frame);
  return ber_mbit_from_means(m.mu0, m.mu1, rule.threshold);
}

/// Crossing point (mu0 - mu1) / (ln mu0 - ln mu1) of the two Poisson
/// likelihoods; 1 when mu0 = 0.
inline double ml_threshold(double mu0, double mu1) {
  require(mu0 >= 0.0 && mu1 > mu0, "ml_threshold: need 0 <= mu0 < mu1");
  if (mu0 == 0.0) return 1.0;
  return (mu0 - mu1) / (std::log(mu0) - std::log(mu1));
}

/// 8 log-spaced molecule counts over [2e3, 2e4].
inline std::vector<long> default_n_grid() {
  std::vector<long> grid;
  for (int k = 0; k < 8; ++k) {
    grid.push_back(std::lround(2e3 * std::pow(10.0, k / 7.0)));
  }
  return grid;
}

struct DiversityFit {
  double gain;
  std::vector<long> n_used;
  std::vector<double> neg_log10_ber;
};

/**
 * Least-squares slope through the origin of -log10 ber_mbit against N, the
 * threshold re-set to ml_threshold at every N. Grid points whose error rate
 * is at or below 1e-300 are left out.
 */
inline DiversityFit diversity_fit_mbit(const LinkConfig& link, const BitFrame& frame,
                                       const std::vector<long>& n_grid) {
  link.validate();
  frame.validate(link.bit_interval);
  require(n_grid.size() >= 5, "diversity_gain_mbit: need at least five grid values");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    require(n_grid[k] > 0, "diversity_gain_mbit: grid values must be positive");
    if (k > 0) require(n_grid[k] > n_grid[k - 1], "diversity_gain_mbit: grid must increase");
  }
  LinkConfig unit = link;
  unit.molecules = 1;
  const auto per_molecule = count_means(unit, frame);

  DiversityFit fit{0.0, {}, {}};
  double sxy = 0.0;
  double sxx = 0.0;
  for (long n : n_grid) {
    const double nd = static_cast<double>(n);
    const double mu0 = nd * per_molecule.mu0;
    const double mu1 = nd * per_molecule.mu1;
    const double pb = ber_mbit_from_means(mu0, mu1, ml_threshold(mu0, mu1));
    if (!(pb > 1e-300)) continue;
    const double y = -std::log10(pb);
    fit.n_used.push_back(n);
    fit.neg_log10_ber.push_back(y);
    sxy += nd * y;
    sxx += nd * nd;
  }
  if (fit.n_used.size() < 2) {
    throw NumericError(NumericError::Kind::DegenerateFit,
                       "diversity_gain_mbit: fewer than two grid points above the underflow floor");
  }
  fit.gain = sxy / sxx;
  return fit;
}

inline double diversity_gain_mbit(const LinkConfig& link, const BitFrame& frame,
                                  const std::vector<long>& n_grid = default_n_grid()) {
  return diversity_fit_mbit(link, frame, n_grid).gain;
}

}  // namespace fracmol
