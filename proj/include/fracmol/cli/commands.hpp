// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracmol/channel.hpp"
#include "fracmol/cli/config.hpp"
#include "fracmol/cli/csv.hpp"
#include "fracmol/detection.hpp"
#include "fracmol/montecarlo.hpp"
#include "fracmol/parallel.hpp"
#include "fracmol/reception.hpp"

namespace fracmol::cli {

struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool pass;
};

inline std::ostream& operator<<(std::ostream& os, const Check& c) {
  return os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << fmt(c.value) << " (expected "
            << fmt(c.expected) << ", tolerance " << fmt(c.tolerance) << ")";
}

inline Check check_rel(std::string name, double value, double expected, double rel_tol) {
  const bool pass = std::abs(value - expected) <= rel_tol * std::abs(expected);
  return {std::move(name), value, expected, rel_tol, pass};
}

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) {
    g[k] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  }
  return g;
}

inline std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return g;
}

inline std::vector<double> time_grid(const RunConfig& c, double lo, double hi, int n) {
  if (c.t_min_s > 0.0) lo = c.t_min_s;
  if (c.t_max_s > 0.0) hi = c.t_max_s;
  if (c.t_points > 0) n = c.t_points;
  if (!(hi > lo)) throw ConfigError("time grid must be increasing");
  return c.t_scale == "lin" ? lin_grid(lo, hi, n) : log_grid(lo, hi, n);
}

inline std::string class_name(const ChannelParams& p) { return std::string(to_string(classify(p).tag)); }

inline std::string echo(const std::string& command, const LinkConfig& l,
                        const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  std::ostringstream os;
  os << "fracmol " << command << " class=" << class_name(l.channel) << " alpha=" << fmt(l.channel.alpha())
     << " beta=" << fmt(l.channel.beta()) << " K_m2s=" << fmt(l.channel.diff_coeff())
     << " a_um=" << fmt(l.distance * 1e6) << " rho_um=" << fmt(l.receptor_radius * 1e6)
     << " lambda_per_s=" << fmt(l.degradation_rate) << " dim=" << l.channel.dim() << " N=" << l.molecules
     << " Tb_s=" << fmt(l.bit_interval);
  for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
  return os.str();
}

// P(k T_b + t) for k = 0..count-1 without degradation; degradation is a
// factor exp(-lambda t) applied by the caller.
inline std::vector<double> undegraded_lags(const LinkConfig& link, double t, int count) {
  LinkConfig l = link;
  l.degradation_rate = 0.0;
  std::vector<double> p(count);
  for (int k = 0; k < count; ++k) p[k] = presence_probability(l, k * link.bit_interval + t);
  return p;
}

inline CountMeans means_from_lags(const std::vector<double>& lags0, const LinkConfig& link, double t,
                                  int bit_index) {
  const double n = static_cast<double>(link.molecules);
  double mu0 = 0.0;
  for (int k = 1; k < bit_index; ++k) {
    const double tk = k * link.bit_interval + t;
    mu0 += n * lags0[k] * std::exp(-link.degradation_rate * tk);
  }
  return {mu0, mu0 + n * lags0[0] * std::exp(-link.degradation_rate * t)};
}

inline double ber_ml(const CountMeans& m) {
  if (!(m.mu1 > m.mu0)) return 0.5;
  return ber_mbit_from_means(m.mu0, m.mu1, ml_threshold(m.mu0, m.mu1));
}

inline double t_o_or_peak(const RunConfig& c, const LinkConfig& link) {
  if (c.to_s) return *c.to_s;
  const double tp = peak_time(link);
  if (tp > link.bit_interval) throw ConfigError("peak time exceeds Tb_s; give to_s explicitly");
  return tp;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Expected observed count over a time grid.
inline Table cmd_nob(const RunConfig& c, std::ostream& log) {
  const LinkConfig link = c.link();
  const auto ts = detail::time_grid(c, 1e-4, 2.0, 121);
  std::vector<Presence> pr(ts.size());
  parallel_for(ts.size(), [&](std::size_t k) { pr[k] = presence(link, ts[k]); });
  Table t{detail::echo("nob", link), {"t_s", "nob", "presence"}, {}};
  bool clamped = false;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    clamped = clamped || pr[k].clamped;
    t.add({fmt(ts[k]), fmt(static_cast<double>(link.molecules) * pr[k].probability), fmt(pr[k].probability)});
  }
  if (clamped) log << "warning: presence probability clamped at 1; receptor too close for the far-field model\n";
  return t;
}

/// Peak time with its H-function residual and, for normal diffusion
/// without degradation, the closed form a^2 / (2 dim K).
inline Table cmd_peaktime(const RunConfig& c, std::ostream&) {
  const LinkConfig link = c.link();
  const auto r = peak_time_detail(link);
  Table t{detail::echo("peaktime", link),
          {"class", "alpha", "beta", "dim", "lambda_per_s", "t_peak_s", "nob_peak", "relative_residual",
           "closed_form_s"},
          {}};
  const bool closed = classify(link.channel).tag == DiffusionTag::Normal && link.degradation_rate == 0.0;
  t.add({detail::class_name(link.channel), fmt(link.channel.alpha()), fmt(link.channel.beta()),
         fmt(link.channel.dim()), fmt(link.degradation_rate), fmt(r.time),
         fmt(static_cast<double>(link.molecules) * r.presence), fmt(r.relative_residual),
         closed ? fmt(normal_peak_time(link)) : std::string()});
  return t;
}

/// Propagator omega(r, t) over a radius grid; t defaults to the peak time.
inline Table cmd_pdf(const RunConfig& c, std::ostream&) {
  const LinkConfig link = c.link();
  const double t = c.t_s ? *c.t_s : peak_time(link);
  if (!(t > 0.0)) throw ConfigError("t_s must be positive");
  const double lo = c.r_min_um > 0.0 ? c.r_min_um : 0.05 * c.a_um;
  const double hi = c.r_max_um > 0.0 ? c.r_max_um : 4.0 * c.a_um;
  const int n = c.r_points > 0 ? c.r_points : 80;
  const auto rs = detail::lin_grid(lo, hi, n);
  std::vector<double> w(rs.size());
  parallel_for(rs.size(), [&](std::size_t k) { w[k] = propagator_pdf(link.channel, rs[k] * 1e-6, t); });
  Table tab{detail::echo("pdf", link, {{"t_s", fmt(t)}}), {"r_um", "z", "omega_per_m_dim"}, {}};
  for (std::size_t k = 0; k < rs.size(); ++k) {
    tab.add({fmt(rs[k]), fmt(similarity_variable(link.channel, rs[k] * 1e-6, t)), fmt(w[k])});
  }
  return tab;
}

/// Analytic error-rate curves; see RunConfig::mode.
inline Table cmd_ber(const RunConfig& c, std::ostream& log) {
  const LinkConfig link = c.link();
  const std::string mode = c.mode.empty() ? "sbit-vs-to" : c.mode;
  if (mode == "sbit-vs-to") {
    const double g = c.gamma.value_or(1.0);
    const double tp = peak_time(link);
    const auto ts = detail::time_grid(c, tp / 20.0, std::min(20.0 * tp, link.bit_interval), 121);
    std::vector<double> p(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) { p[k] = presence_probability(link, ts[k]); });
    Table t{detail::echo("ber", link, {{"mode", mode}, {"gamma", fmt(g)}}),
            {"t_o_s", "ber_sbit", "ber_sbit_poisson"}, {}};
    std::size_t best = 0;
    std::vector<double> ber(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      ber[k] = 0.5 * binomial_count_cdf(link.molecules, p[k], g);
      const double poi = 0.5 * poisson_count_cdf(static_cast<double>(link.molecules) * p[k], g);
      if (ber[k] < ber[best]) best = k;
      t.add({fmt(ts[k]), fmt(ber[k]), fmt(poi)});
    }
    log << "grid argmin t_o = " << fmt(ts[best]) << " s; peak time = " << fmt(tp) << " s\n";
    return t;
  }
  if (mode == "mbit-vs-to") {
    const int i = c.i.value_or(4);
    const auto ts = detail::time_grid(c, link.bit_interval / 100.0, link.bit_interval, 50);
    for (double t : ts) {
      if (t > link.bit_interval) throw ConfigError("t_o grid exceeds Tb_s");
    }
    std::vector<CountMeans> m(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
      m[k] = detail::means_from_lags(detail::undegraded_lags(link, ts[k], i), link, ts[k], i);
    });
    Table t{detail::echo("ber", link, {{"mode", mode}, {"i", fmt(i)}}),
            {"t_o_s", "mu0", "mu1", "gamma", "ber"}, {}};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      double g = 1.0;
      if (c.gamma) g = *c.gamma;
      else if (m[k].mu1 > m[k].mu0) g = ml_threshold(m[k].mu0, m[k].mu1);
      t.add({fmt(ts[k]), fmt(m[k].mu0), fmt(m[k].mu1), fmt(g), fmt(ber_mbit_from_means(m[k].mu0, m[k].mu1, g))});
    }
    return t;
  }
  if (mode == "vs-N") {
    const double t_o = detail::t_o_or_peak(c, link);
    std::vector<long> ns;
    for (double v : detail::log_grid(static_cast<double>(c.n_min), static_cast<double>(c.n_max), c.n_points)) {
      ns.push_back(std::lround(v));
    }
    std::vector<int> is;
    if (c.i) is = {*c.i};
    else is = {1, 2, 3, 4};
    Table t{detail::echo("ber", link, {{"mode", mode}, {"t_o_s", fmt(t_o)}}),
            {"i", "N", "gamma", "ber", "neg_log10_ber", "diversity_gain"}, {}};
    for (int i : is) {
      const auto frame = all_ones_frame(i, t_o);
      const double gain = ns.size() >= 5 ? diversity_gain_mbit(link, frame, ns) : std::nan("");
      for (long n : ns) {
        LinkConfig l = link;
        l.molecules = n;
        const auto m = count_means(l, frame);
        const double g = ml_threshold(m.mu0, m.mu1);
        const double b = ber_mbit_from_means(m.mu0, m.mu1, g);
        t.add({fmt(i), fmt(n), fmt(g), fmt(b), fmt(-std::log10(b)), fmt(gain)});
      }
      if (i == 1) log << "closed-form gain for i = 1: " << fmt(diversity_gain_sbit(link, t_o)) << '\n';
    }
    return t;
  }
  if (mode == "mbit-vs-gamma") {
    const int i = c.i.value_or(4);
    const double t_o = detail::t_o_or_peak(c, link);
    const auto m = count_means(link, all_ones_frame(i, t_o));
    const int gmax = c.gamma_max > 0 ? c.gamma_max
                                     : static_cast<int>(std::ceil(m.mu1 + 10.0 * std::sqrt(m.mu1))) + 1;
    Table t{detail::echo("ber", link, {{"mode", mode}, {"i", fmt(i)}, {"t_o_s", fmt(t_o)}}),
            {"gamma", "ber"}, {}};
    int best = 1;
    double best_ber = 2.0;
    for (int g = 1; g <= gmax; ++g) {
      const double b = ber_mbit_from_means(m.mu0, m.mu1, g);
      if (b < best_ber) {
        best_ber = b;
        best = g;
      }
      t.add({fmt(g), fmt(b)});
    }
    if (m.mu1 > m.mu0) {
      log << "argmin gamma = " << best << "; ML threshold = " << fmt(ml_threshold(m.mu0, m.mu1)) << '\n';
    }
    return t;
  }
  throw ConfigError("unknown ber mode '" + mode + "' (sbit-vs-to, mbit-vs-to, vs-N, mbit-vs-gamma)");
}

namespace detail {

// Error probability of one decision given the actual frame: a single active
// cohort gives the exact binomial, several use the Poisson model.
inline double conditional_error(const LinkConfig& link, const std::vector<int>& bits, int i, double t_o,
                                double g) {
  std::vector<double> p;
  for (int j = 1; j <= i; ++j) {
    if (bits[j - 1]) p.push_back(presence_probability(link, (i - j) * link.bit_interval + t_o));
  }
  double below = 1.0;
  if (p.size() == 1) {
    below = binomial_count_cdf(link.molecules, p[0], g);
  } else if (p.size() > 1) {
    double mu = 0.0;
    for (double v : p) mu += static_cast<double>(link.molecules) * v;
    below = poisson_count_cdf(mu, g);
  }
  return bits[i - 1] ? below : 1.0 - below;
}

}  // namespace detail

/// Monte Carlo estimates next to the analytic values.
inline Table cmd_simulate(const RunConfig& c, std::ostream&) {
  const LinkConfig link = c.link();
  const std::string what = c.what;
  Table t{{}, {"quantity", "index", "t_s", "samples", "estimate", "std_error", "analytic", "z"}, {}};
  auto z = [](double est, double se, double an) { return se > 0.0 ? (est - an) / se : 0.0; };
  // proportions: standard error from the analytic value, finite when no event was seen
  auto z_prop = [&z](double est, double an, double n) { return z(est, std::sqrt(an * (1.0 - an) / n), an); };
  if (what == "presence") {
    const double time = c.to_s ? *c.to_s : (c.t_s ? *c.t_s : peak_time(link));
    const auto e = mc::estimate_presence(link, time, static_cast<std::size_t>(c.samples), c.seed);
    const double an = presence_probability(link, time);
    t.echo = detail::echo("simulate", link, {{"what", what}, {"seed", std::to_string(c.seed)}});
    t.add({"presence", "0", fmt(time), fmt(c.samples), fmt(e.estimate), fmt(e.std_error), fmt(an),
           fmt(z_prop(e.estimate, an, static_cast<double>(c.samples)))});
    return t;
  }
  if (what == "cf") {
    const double time = c.t_s ? *c.t_s : (c.to_s ? *c.to_s : peak_time(link));
    const double ell = spreading_length(link.channel, time);
    const double ks[] = {0.25, 0.5, 1.0, 2.0, 3.0};
    t.echo = detail::echo("simulate", link, {{"what", what}, {"seed", std::to_string(c.seed)}});
    for (int k = 0; k < 5; ++k) {
      const double kk = ks[k] / ell;
      const auto e = mc::estimate_characteristic_function(link.channel, kk, time,
                                                          static_cast<std::size_t>(c.samples), c.seed + k);
      const double an = characteristic_function(link.channel, kk, time);
      t.add({"cf", fmt(k), fmt(time), fmt(c.samples), fmt(e.estimate), fmt(e.std_error), fmt(an),
             fmt(z(e.estimate, e.std_error, an))});
    }
    return t;
  }
  if (what == "ber") {
    std::vector<int> bits = c.bit_vector();
    if (bits.empty()) bits = {1};
    const double t_o = detail::t_o_or_peak(c, link);
    std::vector<double> thresholds;
    for (int i = 1; i <= static_cast<int>(bits.size()); ++i) {
      if (c.gamma) {
        thresholds.push_back(*c.gamma);
        continue;
      }
      BitFrame f{bits, i, t_o};
      const auto m = count_means(link, f);
      thresholds.push_back(m.mu1 > m.mu0 ? ml_threshold(m.mu0, m.mu1) : 1.0);
    }
    std::optional<std::vector<int>> decide;
    if (c.i) decide = std::vector<int>{*c.i};
    const auto r = mc::simulate_ber(link, bits, t_o, thresholds, static_cast<std::size_t>(c.trials), c.seed,
                                    decide);
    std::string bit_string;
    for (int b : bits) bit_string += static_cast<char>('0' + b);
    t.echo = detail::echo("simulate", link,
                          {{"what", what}, {"bits", bit_string}, {"t_o_s", fmt(t_o)}, {"seed", std::to_string(c.seed)}});
    for (const auto& e : r) {
      const double an = detail::conditional_error(link, bits, e.bit_index, t_o, thresholds[e.bit_index - 1]);
      t.add({"bit_error", fmt(e.bit_index), fmt(t_o), fmt(static_cast<long>(e.trials)), fmt(e.rate),
             fmt(e.std_error), fmt(an), fmt(z_prop(e.rate, an, static_cast<double>(e.trials)))});
    }
    return t;
  }
  if (what == "random-isi") {
    const int i = c.i.value_or(4);
    const double t_o = detail::t_o_or_peak(c, link);
    const auto e = mc::ber_mbit_random_isi(link, i, t_o, static_cast<std::size_t>(c.trials), c.seed, c.gamma);
    const auto m = count_means(link, all_ones_frame(i, t_o));
    const double worst = c.gamma ? ber_mbit_from_means(m.mu0, m.mu1, *c.gamma) : detail::ber_ml(m);
    t.echo = detail::echo("simulate", link, {{"what", what}, {"seed", std::to_string(c.seed)}});
    t.add({"ber_random_isi", fmt(i), fmt(t_o), fmt(c.trials), fmt(e.estimate), fmt(e.std_error), fmt(worst), ""});
    return t;
  }
  throw ConfigError("unknown simulate quantity '" + what + "' (presence, cf, ber, random-isi)");
}

// ---------------------------------------------------------------------------
// Figure and table reproduction. Setup defaults are the standard parameter
// set; the three classes keep their (alpha, beta).

struct Setup {
  double diff_coeff = presets::kDiffCoeff;
  double distance = 5e-6;
  double receptor_radius = 0.5e-6;
  double bit_interval = 2.0;

  static Setup from(const RunConfig& c) { return {c.K_m2s, c.a_um * 1e-6, c.rho_um * 1e-6, c.Tb_s}; }

  bool is_default() const { return *this == Setup{}; }
  bool operator==(const Setup&) const = default;

  ChannelParams normal(int dim) const { return {2.0, 1.0, diff_coeff, dim}; }
  ChannelParams sub(int dim) const { return {2.0, 0.5, diff_coeff, dim}; }
  ChannelParams super(int dim) const { return {1.8, 1.0, diff_coeff, dim}; }

  LinkConfig link(const ChannelParams& p, double lambda = 0.0, long n = 100000) const {
    LinkConfig l{p, distance, receptor_radius, lambda, n, bit_interval};
    l.validate();
    return l;
  }

  std::string echo(const std::string& id) const {
    return "fracmol reproduce " + id + " K_m2s=" + fmt(diff_coeff) + " a_um=" + fmt(distance * 1e6) +
           " rho_um=" + fmt(receptor_radius * 1e6) + " Tb_s=" + fmt(bit_interval);
  }
};

namespace detail {

struct Named {
  std::string name;
  ChannelParams params;
};

inline std::vector<Named> three_classes(const Setup& s, int dim) {
  return {{"normal", s.normal(dim)}, {"sub", s.sub(dim)}, {"super", s.super(dim)}};
}

inline Table nob_figure(const Setup& s, const std::string& id, const std::vector<Named>& classes,
                        const std::vector<double>& ts) {
  std::vector<std::string> headers{"t_s"};
  for (const auto& c : classes) {
    for (int l = 0; l <= 2; ++l) headers.push_back(c.name + "_lambda" + std::to_string(l));
  }
  std::vector<std::vector<double>> p0(classes.size(), std::vector<double>(ts.size()));
  parallel_for(classes.size() * ts.size(), [&](std::size_t k) {
    const std::size_t ci = k / ts.size();
    const std::size_t ti = k % ts.size();
    p0[ci][ti] = presence_probability(s.link(classes[ci].params), ts[ti]);
  });
  Table t{s.echo(id) + " dim=3 N=100000 column=expected observed count", headers, {}};
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    std::vector<std::string> row{fmt(ts[ti])};
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      for (int l = 0; l <= 2; ++l) row.push_back(fmt(1e5 * p0[ci][ti] * std::exp(-l * ts[ti])));
    }
    t.add(row);
  }
  return t;
}

}  // namespace detail

struct Reproduction {
  std::vector<std::pair<std::string, Table>> files;
  std::vector<Check> checks;
};

inline Reproduction reproduce_fig2(const Setup& s = {}) {
  Reproduction r;
  auto classes = detail::three_classes(s, 3);
  classes.pop_back();
  r.files.emplace_back("fig2.csv", detail::nob_figure(s, "fig2", classes, detail::log_grid(1e-5, 1.0, 161)));
  const double tn = peak_time(s.link(s.normal(3)));
  r.checks.push_back(check_rel("fig2 normal peak time [s]", tn, 0.0417, 0.005));
  r.checks.push_back(check_rel("fig2 normal peak time vs a^2/(6K) [s]", tn,
                               s.distance * s.distance / (6.0 * s.diff_coeff), 1e-4));
  r.checks.push_back(check_rel("fig2 subdiffusion peak time [s]", peak_time(s.link(s.sub(3))), 0.0021, 0.05));
  return r;
}

inline Reproduction reproduce_fig3(const Setup& s = {}) {
  Reproduction r;
  r.files.emplace_back("fig3.csv",
                       detail::nob_figure(s, "fig3", {{"super", s.super(3)}}, detail::log_grid(1e-3, 10.0, 161)));
  const double expected[] = {0.6287, 0.4824, 0.4099};
  for (int l = 0; l <= 2; ++l) {
    r.checks.push_back(check_rel("fig3 superdiffusion peak time lambda=" + std::to_string(l) + " [s]",
                                 peak_time(s.link(s.super(3), l)), expected[l], 0.02));
  }
  return r;
}

inline Reproduction reproduce_fig4(const Setup& s = {}) {
  Reproduction r;
  const auto ts = detail::log_grid(1e-4, 0.1, 151);
  const long ns[] = {500, 1000, 3000};
  std::vector<std::string> headers{"t_o_s"};
  for (int dim : {2, 3}) {
    for (long n : ns) headers.push_back("dim" + std::to_string(dim) + "_N" + std::to_string(n));
  }
  std::vector<std::vector<double>> p(2, std::vector<double>(ts.size()));
  parallel_for(2 * ts.size(), [&](std::size_t k) {
    const std::size_t d = k / ts.size();
    const std::size_t ti = k % ts.size();
    p[d][ti] = presence_probability(s.link(s.sub(2 + static_cast<int>(d))), ts[ti]);
  });
  Table t{s.echo("fig4") + " class=subdiffusion lambda_per_s=0 gamma=1 dims=2,3 column=SBIT BER", headers, {}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::vector<std::string> row{fmt(ts[k])};
    for (int d = 0; d < 2; ++d) {
      for (long n : ns) row.push_back(fmt(0.5 * binomial_count_cdf(n, p[d][k], 1.0)));
    }
    t.add(row);
  }
  r.files.emplace_back("fig4.csv", t);
  const auto link2 = s.link(s.sub(2), 0.0, 1000);
  const double t_opt = optimal_observation_time(link2);
  r.checks.push_back(check_rel("fig4 optimal observation time, dim=2 [s]", t_opt, 0.0055, 0.05));
  r.checks.push_back(check_rel("fig4 optimal observation time vs peak time, dim=2 [s]", t_opt, peak_time(link2), 1e-6));
  return r;
}

inline Reproduction reproduce_fig5(const Setup& s = {}) {
  Reproduction r;
  const auto ts = detail::lin_grid(s.bit_interval / 50.0, s.bit_interval, 50);
  const int is[] = {4, 10, 100};
  const auto base = s.link(s.super(3));
  std::vector<std::vector<double>> lags(ts.size());
  parallel_for(ts.size(), [&](std::size_t k) { lags[k] = detail::undegraded_lags(base, ts[k], 100); });
  std::vector<std::string> headers{"t_o_s"};
  for (int l = 0; l <= 1; ++l) {
    for (int i : is) headers.push_back("i" + std::to_string(i) + "_lambda" + std::to_string(l));
  }
  Table t{s.echo("fig5") + " class=superdiffusion dim=3 N=100000 all-ones ISI ML threshold column=MBIT BER", headers,
          {}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::vector<std::string> row{fmt(ts[k])};
    for (int l = 0; l <= 1; ++l) {
      const auto link = s.link(s.super(3), l);
      for (int i : is) row.push_back(fmt(detail::ber_ml(detail::means_from_lags(lags[k], link, ts[k], i))));
    }
    t.add(row);
  }
  r.files.emplace_back("fig5.csv", t);

  const auto l1 = s.link(s.super(3), 1.0);
  const double tp1 = peak_time(l1);
  const auto lag1 = detail::undegraded_lags(l1, tp1, 100);
  const double b4 = detail::ber_ml(detail::means_from_lags(lag1, l1, tp1, 4));
  for (int i : {10, 100}) {
    r.checks.push_back(check_rel("fig5 lambda=1 BER(i=" + std::to_string(i) + ") vs BER(i=4) at t_p",
                                 detail::ber_ml(detail::means_from_lags(lag1, l1, tp1, i)), b4, 0.01));
  }
  return r;
}

inline Reproduction reproduce_fig6(const Setup& s = {}) {
  Reproduction r;
  const auto classes = detail::three_classes(s, 2);
  std::vector<std::string> headers{"N"};
  for (const auto& c : classes) {
    headers.push_back(c.name + "_sbit");
    headers.push_back(c.name + "_mbit_i4");
  }
  std::vector<double> p(3);
  std::vector<CountMeans> unit(3);
  const double reference[] = {0.00160, 0.00115, 0.00148};
  for (int ci = 0; ci < 3; ++ci) {
    const auto link = s.link(classes[ci].params, 0.0, 1);
    const double tp = peak_time(link);
    p[ci] = presence_probability(link, tp);
    unit[ci] = count_means(link, all_ones_frame(4, tp));
    r.checks.push_back(check_rel("fig6 " + classes[ci].name + " SBIT diversity gain", diversity_gain_sbit(link, tp),
                                 reference[ci], 0.03));
  }
  Table t{s.echo("fig6") + " dim=2 lambda_per_s=0 t_o=t_p SBIT gamma=1, MBIT i=4 all-ones ISI ML threshold", headers,
          {}};
  for (int k = 1; k <= 20; ++k) {
    const long n = 1000L * k;
    std::vector<std::string> row{fmt(n)};
    for (int ci = 0; ci < 3; ++ci) {
      const double nd = static_cast<double>(n);
      row.push_back(fmt(0.5 * binomial_count_cdf(n, p[ci], 1.0)));
      row.push_back(fmt(detail::ber_ml({nd * unit[ci].mu0, nd * unit[ci].mu1})));
    }
    t.add(row);
  }
  r.files.emplace_back("fig6.csv", t);
  return r;
}

inline Reproduction reproduce_fig7(const Setup& s = {}) {
  Reproduction r;
  const int is[] = {4, 10, 100};
  std::vector<std::string> headers{"gamma"};
  std::vector<std::vector<CountMeans>> m(2);
  for (int l = 0; l <= 1; ++l) {
    const auto link = s.link(s.super(3), l);
    const double tp = peak_time(link);
    const auto lags = detail::undegraded_lags(link, tp, 100);
    for (int i : is) {
      headers.push_back("i" + std::to_string(i) + "_lambda" + std::to_string(l));
      m[l].push_back(detail::means_from_lags(lags, link, tp, i));
    }
  }
  Table t{s.echo("fig7") + " class=superdiffusion dim=3 N=100000 t_o=t_p all-ones ISI column=MBIT BER", headers, {}};
  std::vector<std::vector<double>> best(2, std::vector<double>(3, 2.0));
  std::vector<std::vector<int>> arg(2, std::vector<int>(3, 0));
  for (int g = 1; g <= 60; ++g) {
    std::vector<std::string> row{fmt(g)};
    for (int l = 0; l <= 1; ++l) {
      for (int k = 0; k < 3; ++k) {
        const double b = ber_mbit_from_means(m[l][k].mu0, m[l][k].mu1, g);
        if (b < best[l][k]) {
          best[l][k] = b;
          arg[l][k] = g;
        }
        row.push_back(fmt(b));
      }
    }
    t.add(row);
  }
  r.files.emplace_back("fig7.csv", t);
  r.checks.push_back(check_rel("fig7 lambda=0 argmin gamma, i=4", arg[0][0], 27, 0.0));
  r.checks.push_back(check_rel("fig7 lambda=0 argmin gamma, i=10", arg[0][1], 33, 0.0));
  for (int k = 0; k < 2; ++k) {
    r.checks.push_back(check_rel("fig7 lambda=0 argmin gamma vs ceil(ML threshold), i=" + std::to_string(is[k]),
                                 arg[0][k], std::ceil(ml_threshold(m[0][k].mu0, m[0][k].mu1)), 0.0));
  }
  return r;
}

inline Reproduction reproduce_table1(const Setup& s = {}) {
  Reproduction r;
  const double reference[3][4] = {{0.00160, 0.00057, 0.00051, 0.00050},
                                   {0.00115, 0.00030, 0.00023, 0.00019},
                                   {0.00148, 0.00026, 0.00021, 0.00018}};
  const auto classes = detail::three_classes(s, 2);
  Table t{s.echo("table1") + " dim=2 lambda_per_s=0 t_o=t_p all-ones ISI N grid 2e3..2e4 (8 log-spaced)",
          {"class", "i", "diversity_gain", "reference", "ratio", "closed_form"}, {}};
  for (int ci = 0; ci < 3; ++ci) {
    const auto link = s.link(classes[ci].params);
    const double tp = peak_time(link);
    for (int i = 1; i <= 4; ++i) {
      const double g = diversity_gain_mbit(link, all_ones_frame(i, tp));
      const double ref = reference[ci][i - 1];
      t.add({classes[ci].name, fmt(i), fmt(g), fmt(ref), fmt(g / ref),
             i == 1 ? fmt(diversity_gain_sbit(link, tp)) : std::string()});
      r.checks.push_back(
          check_rel("table1 " + classes[ci].name + " i=" + std::to_string(i), g, ref, i == 1 ? 0.03 : 0.10));
    }
  }
  r.files.emplace_back("table1.csv", t);
  return r;
}

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> targets{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "table1"};
  return targets;
}

inline Reproduction reproduce_one(const std::string& name, const Setup& s) {
  if (name == "fig2") return reproduce_fig2(s);
  if (name == "fig3") return reproduce_fig3(s);
  if (name == "fig4") return reproduce_fig4(s);
  if (name == "fig5") return reproduce_fig5(s);
  if (name == "fig6") return reproduce_fig6(s);
  if (name == "fig7") return reproduce_fig7(s);
  if (name == "table1") return reproduce_table1(s);
  throw ConfigError("unknown reproduce target '" + name + "' (fig2..fig7, table1, all)");
}

/// Writes the CSV files of `target` ("all" for every target) into out_dir
/// and returns the landmark checks.
inline std::vector<Check> reproduce(const std::string& target, const std::string& out_dir, const Setup& s = {}) {
  std::vector<std::string> todo{target};
  if (target == "all") todo = reproduce_targets();
  if (target != "all" &&
      std::find(reproduce_targets().begin(), reproduce_targets().end(), target) == reproduce_targets().end()) {
    throw ConfigError("unknown reproduce target '" + target + "' (fig2..fig7, table1, all)");
  }
  const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  std::vector<Check> checks;
  for (const auto& name : todo) {
    const Reproduction r = reproduce_one(name, s);
    for (const auto& [file, table] : r.files) table.write_file((dir / file).string());
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
  }
  return checks;
}

}  // namespace fracmol::cli
