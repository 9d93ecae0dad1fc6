// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "fracmol/error.hpp"
#include "fracmol/special.hpp"

namespace fracmol {

/// Space-fractional order alpha, time-fractional order beta, diffusion
/// coefficient K [m^2/s] and spatial dimension of an unbounded medium.
class ChannelParams {
 public:
  ChannelParams(double alpha, double beta, double diff_coeff, int dim)
      : alpha_(alpha), beta_(beta), diff_coeff_(diff_coeff), dim_(dim) {
    require(alpha >= 1.0 && alpha <= 2.0, "channel: alpha must lie in [1, 2]");
    require(beta > 0.0 && beta <= 1.0, "channel: beta must lie in (0, 1]");
    require(diff_coeff > 0.0 && std::isfinite(diff_coeff), "channel: K must be positive");
    require(dim >= 1 && dim <= 3, "channel: dim must be 1, 2 or 3");
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double diff_coeff() const { return diff_coeff_; }
  int dim() const { return dim_; }

  ChannelParams with_dim(int dim) const { return {alpha_, beta_, diff_coeff_, dim}; }

  bool operator==(const ChannelParams&) const = default;

 private:
  double alpha_;
  double beta_;
  double diff_coeff_;
  int dim_;
};

enum class DiffusionTag { Normal, Quasinormal, Subdiffusion, Superdiffusion };

inline std::string_view to_string(DiffusionTag tag) {
  switch (tag) {
    case DiffusionTag::Normal: return "normal";
    case DiffusionTag::Quasinormal: return "quasinormal";
    case DiffusionTag::Subdiffusion: return "subdiffusion";
    case DiffusionTag::Superdiffusion: return "superdiffusion";
  }
  return "unknown";
}

struct DiffusionClass {
  DiffusionTag tag;
  /// MSD grows as t^msd_exponent.
  double msd_exponent;
};

inline DiffusionClass classify(const ChannelParams& p) {
  const double e = 2.0 * p.beta() / p.alpha();
  DiffusionTag tag;
  if (p.alpha() == 2.0 && p.beta() == 1.0) tag = DiffusionTag::Normal;
  else if (p.alpha() == 2.0 * p.beta()) tag = DiffusionTag::Quasinormal;
  else if (e < 1.0) tag = DiffusionTag::Subdiffusion;
  else tag = DiffusionTag::Superdiffusion;
  return {tag, e};
}

namespace presets {

inline constexpr double kDiffCoeff = 1e-10;

inline ChannelParams normal(int dim = 3) { return {2.0, 1.0, kDiffCoeff, dim}; }
inline ChannelParams subdiffusion(int dim = 3) { return {2.0, 0.5, kDiffCoeff, dim}; }
inline ChannelParams superdiffusion(int dim = 3) { return {1.8, 1.0, kDiffCoeff, dim}; }

}  // namespace presets

/// The H^{2,1}_{2,3} kernel of the propagator. At alpha = 2 the pairs
/// (1, 1/2) of the upper and last lower slots cancel, leaving H^{2,0}_{1,2}.
inline special::HFunctionSpec propagator_kernel(double alpha, double beta, int dim) {
  if (alpha == 2.0) {
    return special::HFunctionSpec(2, 0, {{1.0, 0.5 * beta}}, {{1.0, 0.5}, {0.5 * dim, 0.5}});
  }
  return special::HFunctionSpec(
      2, 1, {{1.0, 1.0 / alpha}, {1.0, beta / alpha}},
      {{1.0, 1.0 / alpha}, {0.5 * dim, 0.5}, {1.0, 0.5}});
}

/// Similarity variable r / (2 K^{1/alpha} t^{beta/alpha}).
inline double similarity_variable(const ChannelParams& p, double r, double t) {
  return r / (2.0 * std::pow(p.diff_coeff(), 1.0 / p.alpha()) *
              std::pow(t, p.beta() / p.alpha()));
}

/**
 * Fundamental solution omega(r, t) [m^-dim] of the space-time fractional
 * diffusion equation for a unit point release at the origin,
 *
 *   omega = H^{2,1}_{2,3}(z) / (alpha (r sqrt(pi))^dim),
 *   z = r / (2 K^{1/alpha} t^{beta/alpha}).
 *
 * Quadrature noise in the far tail is clamped at zero.
 */
inline double propagator_pdf(const ChannelParams& p, double r, double t,
                             const special::QuadratureConfig& cfg = {}) {
  require(r > 0.0 && std::isfinite(r), "propagator: r must be positive");
  require(t > 0.0 && std::isfinite(t), "propagator: t must be positive");
  const double z = similarity_variable(p, r, t);
  const double h = special::foxh_eval(propagator_kernel(p.alpha(), p.beta(), p.dim()), z, cfg);
  const double v = h / (p.alpha() * std::pow(r * std::sqrt(std::numbers::pi), p.dim()));
  return std::max(v, 0.0);
}

/// (4 pi K t)^{-dim/2} exp(-r^2 / (4 K t)).
inline double gaussian_pdf(double diff_coeff, int dim, double r, double t) {
  require(diff_coeff > 0.0 && t > 0.0 && r >= 0.0, "gaussian_pdf: need K > 0, t > 0, r >= 0");
  return std::pow(4.0 * std::numbers::pi * diff_coeff * t, -0.5 * dim) *
         std::exp(-r * r / (4.0 * diff_coeff * t));
}

/// Fourier symbol E_beta(-K k^alpha t^beta).
inline double characteristic_function(const ChannelParams& p, double k, double t) {
  require(k >= 0.0 && std::isfinite(k), "characteristic_function: k must be nonnegative");
  require(t > 0.0 && std::isfinite(t), "characteristic_function: t must be positive");
  if (k == 0.0) return 1.0;
  const double x = p.diff_coeff() * std::pow(k, p.alpha()) * std::pow(t, p.beta());
  return special::mittag_leffler(p.beta(), x);
}

/// Surface area of the unit sphere in `dim` dimensions (2 for the line).
inline double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
  }
  throw DomainError("unit_sphere_area: dim must be 1, 2 or 3");
}

/// Length scale 2 K^{1/alpha} t^{beta/alpha} at which z = 1.
inline double spreading_length(const ChannelParams& p, double t) {
  return 2.0 * std::pow(p.diff_coeff(), 1.0 / p.alpha()) * std::pow(t, p.beta() / p.alpha());
}

/**
 * Probability mass of omega(., t) inside the ball |x| < r_max.
 *
 * Integrates S_dim r^dim omega(r, t) over log r. For alpha < 2 the
 * omega ~ r^{-dim-alpha} tail is used to add the mass beyond r_max when
 * `add_tail` is set, so the result estimates the total mass.
 */
inline double radial_mass(const ChannelParams& p, double t, double r_max, bool add_tail = false,
                          int panels_per_decade = 4) {
  require(r_max > 0.0 && t > 0.0, "radial_mass: need r_max > 0 and t > 0");
  const double ell = spreading_length(p, t);
  const double lo = std::log(ell * 1e-6);
  const double hi = std::log(r_max);
  if (hi <= lo) return 0.0;
  const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) / std::log(10.0) * panels_per_decade)));
  const special::GaussLegendreRule rule(16);
  const double area = unit_sphere_area(p.dim());
  auto f = [&](double u) {
    const double r = std::exp(u);
    return area * std::pow(r, p.dim()) * propagator_pdf(p, r, t);
  };
  const double h = (hi - lo) / panels;
  double mass = 0.0;
  for (int k = 0; k < panels; ++k) mass += rule.integrate(f, lo + k * h, lo + (k + 1) * h);
  if (add_tail && p.alpha() < 2.0) {
    mass += area * std::pow(r_max, p.dim()) * propagator_pdf(p, r_max, t) / p.alpha();
  }
  return mass;
}

}  // namespace fracmol
