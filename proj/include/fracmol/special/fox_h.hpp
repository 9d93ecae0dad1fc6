// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "fracmol/error.hpp"
#include "fracmol/special/gauss_legendre.hpp"
#include "fracmol/special/log_gamma.hpp"

namespace fracmol::special {

/// One (shift, scale) pair: (a_j, A_j) in the upper row or (b_j, B_j) in the
/// lower row of an H-function.
struct HCoefficient {
  double shift;
  double scale;
};

/**
 * Order quadruple and coefficient rows of a Fox H-function
 *
 *   H^{m,n}_{p,q}(z) = 1/(2 pi i) \int chi(s) z^{-s} ds,
 *   chi(s) = prod_{j<m} G(b_j + B_j s) prod_{j<n} G(1 - a_j - A_j s)
 *          / [prod_{j>=m} G(1 - b_j - B_j s) prod_{j>=n} G(a_j + A_j s)].
 *
 * The "left" poles come from G(b_j + B_j s), j < m, and the "right" poles from
 * G(1 - a_j - A_j s), j < n. Construction rejects specs where a pole is shared
 * by both families or where no vertical line separates them.
 */
class HFunctionSpec {
 public:
  HFunctionSpec(int m, int n, std::vector<HCoefficient> upper,
                std::vector<HCoefficient> lower)
      : m_(m), n_(n), upper_(std::move(upper)), lower_(std::move(lower)) {
    const int p = static_cast<int>(upper_.size());
    const int q = static_cast<int>(lower_.size());
    fracmol::require(m_ >= 0 && m_ <= q, "H-function: need 0 <= m <= q");
    fracmol::require(n_ >= 0 && n_ <= p, "H-function: need 0 <= n <= p");
    for (const auto& c : upper_) {
      fracmol::require(std::isfinite(c.shift) && c.scale > 0.0 && std::isfinite(c.scale),
                      "H-function: upper scales A_j must be positive");
    }
    for (const auto& c : lower_) {
      fracmol::require(std::isfinite(c.shift) && c.scale > 0.0 && std::isfinite(c.scale),
                      "H-function: lower scales B_j must be positive");
    }
    locate_contour();
  }

  int m() const { return m_; }
  int n() const { return n_; }
  int p() const { return static_cast<int>(upper_.size()); }
  int q() const { return static_cast<int>(lower_.size()); }
  const std::vector<HCoefficient>& upper() const { return upper_; }
  const std::vector<HCoefficient>& lower() const { return lower_; }

  /// a* = sum_{j<n} A_j - sum_{j>=n} A_j + sum_{j<m} B_j - sum_{j>=m} B_j.
  /// The vertical-line integral converges for every z > 0 iff a* > 0.
  double convergence_index() const {
    double a = 0.0;
    for (int j = 0; j < p(); ++j) a += (j < n_ ? 1.0 : -1.0) * upper_[j].scale;
    for (int j = 0; j < q(); ++j) a += (j < m_ ? 1.0 : -1.0) * lower_[j].scale;
    return a;
  }

  /// sum B_j - sum A_j.
  double delta() const {
    double d = 0.0;
    for (const auto& c : lower_) d += c.scale;
    for (const auto& c : upper_) d -= c.scale;
    return d;
  }

  /// Rightmost pole of the left family (-inf when m = 0).
  double left_pole_bound() const { return left_bound_; }
  /// Leftmost pole of the right family (+inf when n = 0).
  double right_pole_bound() const { return right_bound_; }
  /// Abscissa of the integration contour.
  double contour_abscissa() const { return contour_; }
  /// Distance from the contour to the nearest pole.
  double pole_clearance() const {
    return std::min(contour_ - left_bound_, right_bound_ - contour_);
  }

  /// Abscissa in the pole gap minimizing |chi(c)| z^{-c}, the integrand size
  /// at Im s = 0. Keeps at least `min_clearance` from either pole family.
  double contour_for(double z, double min_clearance = 0.02) const {
    const double log_z = std::log(z);
    double lo = left_bound_;
    double hi = right_bound_;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      lo = -4.0;
      hi = 4.0;
    } else if (!std::isfinite(lo)) {
      lo = hi - 8.0;
    }
    // A zero of the kernel on the real axis does not make the line integral small.
    auto cost = [&](double c) {
      const double v = log_kernel({c, 0.0}).real() - c * log_z;
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    if (!std::isfinite(hi)) {
      // No right poles: walk right until the cost turns up.
      double step = 8.0;
      hi = lo + step;
      while (step < 4096.0 && cost(hi) < cost(hi - 0.5 * step)) {
        step *= 2.0;
        hi = lo + step;
      }
    }
    const double pad = std::min(min_clearance, 0.25 * (right_bound_ - left_bound_));
    if (std::isfinite(left_bound_)) lo += pad;
    if (std::isfinite(right_bound_)) hi -= pad;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = cost(x1);
    double f2 = cost(x2);
    while (b - a > 1e-4 * (1.0 + std::abs(a))) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = cost(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = cost(x2);
      }
    }
    const double best = 0.5 * (a + b);
    return cost(best) < cost(contour_) ? best : contour_;
  }

  /// Distance from abscissa c to the nearest pole.
  double clearance_at(double c) const { return std::min(c - left_bound_, right_bound_ - c); }

  /// log chi(s).
  std::complex<double> log_kernel(std::complex<double> s) const {
    std::complex<double> v = 0.0;
    for (int j = 0; j < q(); ++j) {
      const auto& c = lower_[j];
      if (j < m_) v += log_gamma(c.shift + c.scale * s);
      else v -= log_gamma(1.0 - c.shift - c.scale * s);
    }
    for (int j = 0; j < p(); ++j) {
      const auto& c = upper_[j];
      if (j < n_) v += log_gamma(1.0 - c.shift - c.scale * s);
      else v -= log_gamma(c.shift + c.scale * s);
    }
    return v;
  }

 private:
  void locate_contour() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    left_bound_ = -inf;
    right_bound_ = inf;
    for (int j = 0; j < m_; ++j) {
      left_bound_ = std::max(left_bound_, -lower_[j].shift / lower_[j].scale);
    }
    for (int j = 0; j < n_; ++j) {
      right_bound_ = std::min(right_bound_, (1.0 - upper_[j].shift) / upper_[j].scale);
    }
    if (left_bound_ >= right_bound_) reject_overlap();

    if (std::isfinite(left_bound_) && std::isfinite(right_bound_)) {
      contour_ = 0.5 * (left_bound_ + right_bound_);
    } else if (std::isfinite(left_bound_)) {
      contour_ = left_bound_ + 1.0;
    } else if (std::isfinite(right_bound_)) {
      contour_ = right_bound_ - 1.0;
    } else {
      contour_ = 0.0;
    }
  }

  // Families overlap on [right_bound_, left_bound_]; find out whether any pole
  // is actually shared before reporting.
  [[noreturn]] void reject_overlap() const {
    constexpr int max_poles = 100000;
    std::vector<double> left;
    for (int j = 0; j < m_; ++j) {
      for (int k = 0; k < max_poles; ++k) {
        const double s = -(lower_[j].shift + k) / lower_[j].scale;
        if (s < right_bound_ - 1e-9) break;
        left.push_back(s);
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < max_poles; ++k) {
        const double s = (1.0 - upper_[j].shift + k) / upper_[j].scale;
        if (s > left_bound_ + 1e-9) break;
        for (double l : left) {
          if (std::abs(l - s) <= 1e-12 * std::max(1.0, std::abs(s))) {
            std::ostringstream msg;
            msg << "H-function: pole at s = " << s << " belongs to both pole families";
            throw NumericError(NumericError::Kind::PoleCollision, msg.str());
          }
        }
      }
    }
    throw NumericError(NumericError::Kind::NoSeparatingLine,
                       "H-function: pole families interleave; no vertical contour separates them");
  }

  int m_;
  int n_;
  std::vector<HCoefficient> upper_;
  std::vector<HCoefficient> lower_;
  double left_bound_ = 0.0;
  double right_bound_ = 0.0;
  double contour_ = 0.0;
};

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  double max_contour_halflength = 400.0;
  int panel_order = 20;
  /// Move the contour to the z-dependent abscissa of HFunctionSpec::contour_for.
  bool adapt_contour = true;

  void validate() const {
    fracmol::require(rel_tol > 0.0 && rel_tol < 1.0, "quadrature: rel_tol must lie in (0, 1)");
    fracmol::require(abs_tol > 0.0 && abs_tol < 1.0, "quadrature: abs_tol must lie in (0, 1)");
    fracmol::require(max_contour_halflength >= 10.0,
                    "quadrature: max_contour_halflength must be >= 10");
    fracmol::require(panel_order >= 2 && panel_order <= 200,
                    "quadrature: panel_order must lie in [2, 200]");
  }
};

struct HFunctionValue {
  double value;
  /// Discretization plus truncation estimate; floored at the rounding level
  /// of the contour sum.
  double error_estimate;
  /// Integral of |integrand|, the scale against which rounding is measured.
  double magnitude;
  /// Contour half-length actually used.
  double halflength;
};

/**
 * Evaluates H^{m,n}_{p,q}(z) for real z > 0 by Mellin-Barnes quadrature along
 * a vertical line inside the pole gap (see QuadratureConfig::adapt_contour).
 *
 * For real parameters the integrand is conjugate-symmetric, so only Im s >= 0
 * is integrated. Gauss-Legendre panels cover segments that double outward from
 * the pole-clearance scale; each panel is integrated whole and as two halves,
 * the difference giving the discretization estimate. Integration stops at the
 * first panel past |Im s| = 4 whose exponential tail bound falls below a
 * tenth of the tolerance.
 */
inline HFunctionValue foxh_integrate(const HFunctionSpec& spec, double z,
                                     const QuadratureConfig& cfg = {}) {
  cfg.validate();
  fracmol::require(z > 0.0 && std::isfinite(z), "H-function: argument z must be positive and finite");
  if (!(spec.convergence_index() > 0.0)) {
    std::ostringstream msg;
    msg << "H-function: contour integral diverges (a* = " << spec.convergence_index()
        << " <= 0)";
    throw NumericError(NumericError::Kind::NonConvergent, msg.str());
  }

  const GaussLegendreRule rule(cfg.panel_order);
  const double c = cfg.adapt_contour ? spec.contour_for(z) : spec.contour_abscissa();
  const double log_z = std::log(z);
  const double clearance = spec.clearance_at(c);
  // Gaussian-like decay in Im s has width ~ sqrt|c| far right of the origin.
  const double max_halflength = std::max(cfg.max_contour_halflength, 16.0 * std::sqrt(std::abs(c)));
  // Upper bound on the phase rate of the integrand over Im s <= t.
  auto phase_rate = [&](double t) {
    double rate = std::abs(log_z);
    for (const auto& co : spec.upper()) rate += co.scale * std::log1p(co.scale * t + 1.0);
    for (const auto& co : spec.lower()) rate += co.scale * std::log1p(co.scale * t + 1.0);
    return rate;
  };

  double max_abs_in_panel = 0.0;
  auto integrand = [&](double t) {
    const std::complex<double> s(c, t);
    const std::complex<double> v = std::exp(spec.log_kernel(s) - s * log_z);
    max_abs_in_panel = std::max(max_abs_in_panel, std::abs(v));
    return v.real();
  };

  // Neumaier-compensated running sums.
  double sum = 0.0;
  double compensation = 0.0;
  auto accumulate = [&](double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) compensation += (sum - t) + x;
    else compensation += (x - t) + sum;
    sum = t;
  };

  // |chi(c + it)| decays like exp(-pi a* t / 2); the tail beyond a panel
  // start is bounded by the panel maximum times this length.
  const double decay_length = 2.0 / (std::numbers::pi * spec.convergence_index());

  double discretization = 0.0;
  double magnitude = 0.0;
  double truncation = std::numeric_limits<double>::infinity();
  double seg_lo = 0.0;
  // Segments start at the pole-clearance scale and double outward.
  double seg_hi = std::min(4.0, 4.0 * clearance);
  bool done = false;
  while (!done) {
    // about six radians of phase per panel
    const double width = std::min({std::clamp(2.0 * std::max(clearance, seg_lo), 0.02, 2.0),
                                   6.0 / phase_rate(seg_hi)});
    const int panels = static_cast<int>(std::ceil((seg_hi - seg_lo) / width - 1e-12));
    const double h = (seg_hi - seg_lo) / panels;
    for (int k = 0; k < panels && !done; ++k) {
      const double a = seg_lo + k * h;
      const double b = a + h;
      const double mid = 0.5 * (a + b);
      max_abs_in_panel = 0.0;
      const double whole = rule.integrate(integrand, a, b);
      const double halves = rule.integrate(integrand, a, mid) + rule.integrate(integrand, mid, b);
      accumulate(halves);
      discretization += std::abs(halves - whole);
      magnitude += max_abs_in_panel * h;

      // below |Im s| ~ |c| the decay is only Gaussian, with rate ~ t / |c|
      const double tail = max_abs_in_panel * std::max(decay_length, 2.0 * (std::abs(c) + 1.0) / a) / std::numbers::pi;
      const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs((sum + compensation) / std::numbers::pi));
      if (a >= 4.0 && tail < 0.1 * tol) {
        truncation = tail;
        seg_hi = b;
        done = true;
      }
    }
    if (done) break;
    if (seg_hi >= max_halflength) {
      std::ostringstream msg;
      msg << "H-function: contour truncated at |Im s| = " << seg_hi
          << " with tail bound " << max_abs_in_panel * decay_length / std::numbers::pi
          << " above tolerance";
      throw NumericError(NumericError::Kind::ToleranceNotMet, msg.str());
    }
    seg_lo = seg_hi;
    seg_hi = std::min(2.0 * seg_hi, max_halflength);
  }

  const double value = (sum + compensation) / std::numbers::pi;
  magnitude /= std::numbers::pi;
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  const double error = discretization / std::numbers::pi + truncation;
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  if (error > std::max(tol, rounding)) {
    std::ostringstream msg;
    msg << "H-function: panel error estimate " << error << " exceeds tolerance " << tol;
    throw NumericError(NumericError::Kind::ToleranceNotMet, msg.str());
  }
  return {value, std::max(error, rounding), magnitude, seg_hi};
}

/// Value of H^{m,n}_{p,q}(z); see foxh_integrate.
inline double foxh_eval(const HFunctionSpec& spec, double z, const QuadratureConfig& cfg = {}) {
  return foxh_integrate(spec, z, cfg).value;
}

}  // namespace fracmol::special
