// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracmol/channel.hpp"
#include "fracmol/error.hpp"
#include "fracmol/optimize.hpp"
#include "fracmol/special.hpp"

namespace fracmol {

/// Transmitter/receiver geometry and signalling parameters. Lengths in m,
/// rates in 1/s, times in s.
struct LinkConfig {
  ChannelParams channel;
  double distance = 5e-6;
  double receptor_radius = 0.5e-6;
  double degradation_rate = 0.0;
  long molecules = 100000;
  double bit_interval = 2.0;

  void validate() const {
    require(distance > 0.0 && std::isfinite(distance), "link: distance a must be positive");
    require(receptor_radius > 0.0, "link: receptor radius rho must be positive");
    require(receptor_radius <= distance / 5.0, "link: receptor radius must be at most a/5");
    require(degradation_rate >= 0.0 && !std::isnan(degradation_rate),
            "link: degradation rate must be nonnegative");
    require(molecules >= 0, "link: molecule count N must be nonnegative");
    require(bit_interval > 0.0 && std::isfinite(bit_interval), "link: bit interval must be positive");
  }
};

/// 2 rho, pi rho^2 or 4/3 pi rho^3.
inline double receptor_volume(int dim, double rho) {
  require(rho > 0.0, "receptor_volume: rho must be positive");
  switch (dim) {
    case 1: return 2.0 * rho;
    case 2: return std::numbers::pi * rho * rho;
    case 3: return 4.0 / 3.0 * std::numbers::pi * rho * rho * rho;
  }
  throw DomainError("receptor_volume: dim must be 1, 2 or 3");
}

struct Presence {
  double probability;
  /// Set when V_rho omega e^{-lambda t} exceeded 1 and was clamped.
  bool clamped;
};

/// Far-field probability that a molecule released at t = 0 is alive and
/// inside the receptor at time t.
inline Presence presence(const LinkConfig& link, double t) {
  link.validate();
  require(t > 0.0 && std::isfinite(t), "presence: t must be positive");
  if (std::isinf(link.degradation_rate)) return {0.0, false};
  const double v = receptor_volume(link.channel.dim(), link.receptor_radius) *
                   propagator_pdf(link.channel, link.distance, t) *
                   std::exp(-link.degradation_rate * t);
  if (v > 1.0) return {1.0, true};
  return {v, false};
}

inline double presence_probability(const LinkConfig& link, double t) {
  return presence(link, t).probability;
}

/// Expected number of molecules counted at time t after a release of N.
inline double expected_observed(const LinkConfig& link, double t) {
  return static_cast<double>(link.molecules) * presence_probability(link, t);
}

// ---------------------------------------------------------------------------
// Peak-time condition.

/// Argument K^{1/beta} t / (a/2)^{alpha/beta} of the peak-time H-functions.
inline double theorem1_argument(const LinkConfig& link, double t) {
  const auto& p = link.channel;
  return std::pow(p.diff_coeff(), 1.0 / p.beta()) * t /
         std::pow(0.5 * link.distance, p.alpha() / p.beta());
}

/// H^{1,2}_{3,2} proportional to omega(a, t) as a function of the argument.
inline special::HFunctionSpec theorem1_rhs_kernel(const ChannelParams& p) {
  const double ab = p.alpha() / (2.0 * p.beta());
  return special::HFunctionSpec(
      1, 2, {{0.0, 1.0 / p.beta()}, {0.5 * (2 - p.dim()), ab}, {0.0, ab}},
      {{0.0, 1.0 / p.beta()}, {0.0, 1.0}});
}

/// H^{1,3}_{4,3}, the logarithmic derivative partner of theorem1_rhs_kernel.
inline special::HFunctionSpec theorem1_lhs_kernel(const ChannelParams& p) {
  const double ab = p.alpha() / (2.0 * p.beta());
  return special::HFunctionSpec(
      1, 3, {{0.0, 1.0}, {0.0, 1.0 / p.beta()}, {0.5 * (2 - p.dim()), ab}, {0.0, ab}},
      {{0.0, 1.0 / p.beta()}, {0.0, 1.0}, {1.0, 1.0}});
}

/// z d/dz of the alpha = 2 propagator kernel, negated: H^{3,0}_{2,3}.
inline special::HFunctionSpec gaussian_family_log_derivative_kernel(double beta, int dim) {
  return special::HFunctionSpec(3, 0, {{1.0, 0.5 * beta}, {0.0, 1.0}},
                                {{1.0, 0.5}, {0.5 * dim, 0.5}, {1.0, 1.0}});
}

struct Theorem1Terms {
  double lhs;
  double rhs;
  /// lhs - lambda t rhs.
  double residual;
  /// residual / rhs, which equals t d ln Nob / dt.
  double relative;
};

inline Theorem1Terms theorem1_terms(const LinkConfig& link, double t,
                                    const special::QuadratureConfig& cfg = {}) {
  link.validate();
  require(t > 0.0 && std::isfinite(t), "theorem1_residual: t must be positive");
  const auto& p = link.channel;
  double lhs = 0.0;
  double rhs = 0.0;
  if (p.alpha() == 2.0) {
    // Same identity through the two-parameter kernel, which stays accurate
    // where omega(a, t) is exponentially small.
    const double z = similarity_variable(p, link.distance, t);
    rhs = 0.5 * p.beta() * special::foxh_eval(propagator_kernel(2.0, p.beta(), p.dim()), z, cfg);
    lhs = 0.25 * p.beta() * p.beta() *
          special::foxh_eval(gaussian_family_log_derivative_kernel(p.beta(), p.dim()), z, cfg);
  } else {
    const double x = theorem1_argument(link, t);
    lhs = special::foxh_eval(theorem1_lhs_kernel(p), x, cfg);
    rhs = special::foxh_eval(theorem1_rhs_kernel(p), x, cfg);
  }
  const double residual = lhs - link.degradation_rate * t * rhs;
  return {lhs, rhs, residual, residual / rhs};
}

/// Left side minus lambda t times the right side of the peak-time identity.
/// Positive while Nob(t) rises, zero at the peak, negative after.
inline double theorem1_residual(const LinkConfig& link, double t) {
  return theorem1_terms(link, t).residual;
}

inline double theorem1_relative_residual(const LinkConfig& link, double t) {
  return theorem1_terms(link, t).relative;
}

// ---------------------------------------------------------------------------
// Peak time.

struct PeakOptions {
  int scan_min_exponent = -20;
  int scan_max_exponent = 20;
  double rel_tol = 1e-6;
  bool polish = true;
  /// Throw ConsistencyCheck when |relative residual| at the peak exceeds this;
  /// a nonpositive value disables the check.
  double residual_limit = 1e-3;
};

struct PeakResult {
  double time;
  double presence;
  double relative_residual;
  double bracket_lo;
  double bracket_hi;
};

/// Natural time scale (a^alpha / K)^{1/beta}.
inline double natural_time_scale(const LinkConfig& link) {
  const auto& p = link.channel;
  return std::pow(std::pow(link.distance, p.alpha()) / p.diff_coeff(), 1.0 / p.beta());
}

namespace detail {

// Maximizes g(log t) by a geometric scan, golden section and Newton polish.
template <class G>
double maximize_over_log_time(G&& g, double t0, const PeakOptions& opt, double& lo, double& hi) {
  std::vector<double> grid;
  for (int j = opt.scan_min_exponent; j <= opt.scan_max_exponent; ++j) {
    grid.push_back(std::log(t0) + j * std::numbers::ln2);
  }
  const auto br = optimize::bracket_maximum(g, grid);
  double u = optimize::golden_section_max(g, br.lo, br.hi, opt.rel_tol);
  if (opt.polish) u = optimize::polish_stationary(g, u, br.lo, br.hi);
  lo = std::exp(br.lo);
  hi = std::exp(br.hi);
  return std::exp(u);
}

}  // namespace detail

/// Maximizer of expected_observed, checked against the peak-time identity.
inline PeakResult peak_time_detail(const LinkConfig& link, const PeakOptions& opt = {}) {
  link.validate();
  auto log_presence = [&](double u) {
    const double v = presence_probability(link, std::exp(u));
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::max();
  };
  double lo = 0.0;
  double hi = 0.0;
  const double tp = detail::maximize_over_log_time(log_presence, natural_time_scale(link), opt, lo, hi);
  const double rel = theorem1_relative_residual(link, tp);
  if (opt.residual_limit > 0.0 && !(std::abs(rel) < opt.residual_limit)) {
    std::ostringstream msg;
    msg << "peak time " << tp << " s fails the H-function peak condition (relative residual "
        << rel << ")";
    throw NumericError(NumericError::Kind::ConsistencyCheck, msg.str());
  }
  return {tp, presence_probability(link, tp), rel, lo, hi};
}

inline double peak_time(const LinkConfig& link) { return peak_time_detail(link).time; }

/// a^2 / (2 dim K), the peak time of normal diffusion without degradation.
inline double normal_peak_time(const LinkConfig& link) {
  return link.distance * link.distance / (2.0 * link.channel.dim() * link.channel.diff_coeff());
}

}  // namespace fracmol
