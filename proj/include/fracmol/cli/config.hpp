// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracmol/channel.hpp"
#include "fracmol/error.hpp"
#include "fracmol/reception.hpp"

namespace fracmol::cli {

/// Raised for unreadable or invalid run configuration (exit code 2).
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Settings shared by all commands. Units follow the key names: lengths in
/// micrometres, K in m^2/s, rates in 1/s, times in s.
struct RunConfig {
  std::string diffusion_class = "normal";
  std::optional<double> alpha;
  std::optional<double> beta;
  double K_m2s = presets::kDiffCoeff;
  double a_um = 5.0;
  double rho_um = 0.5;
  double lambda_per_s = 0.0;
  int dim = 3;
  long N = 100000;
  double Tb_s = 2.0;
  std::optional<double> to_s;
  std::optional<double> gamma;
  std::string bits;
  std::optional<int> i;
  std::uint64_t seed = 1;
  std::string out;
  bool check = false;

  std::string mode;
  std::string what = "presence";
  double t_min_s = 0.0;
  double t_max_s = 0.0;
  int t_points = 0;
  std::string t_scale = "log";
  std::optional<double> t_s;
  double r_min_um = 0.0;
  double r_max_um = 0.0;
  int r_points = 0;
  long n_min = 2000;
  long n_max = 20000;
  int n_points = 8;
  int gamma_max = 0;
  long trials = 2000;
  long samples = 1000000;

  std::map<std::string, std::string> echo;

  ChannelParams channel() const {
    double al = 2.0;
    double be = 1.0;
    if (diffusion_class == "normal") {
    } else if (diffusion_class == "sub" || diffusion_class == "subdiffusion") {
      be = 0.5;
    } else if (diffusion_class == "super" || diffusion_class == "superdiffusion") {
      al = 1.8;
    } else {
      throw ConfigError("unknown diffusion class '" + diffusion_class + "' (normal, sub, super)");
    }
    if (alpha) al = *alpha;
    if (beta) be = *beta;
    try {
      return ChannelParams(al, be, K_m2s, dim);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }

  LinkConfig link() const {
    LinkConfig l{channel(), a_um * 1e-6, rho_um * 1e-6, lambda_per_s, N, Tb_s};
    try {
      l.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    return l;
  }

  /// Bit sequence from `bits`, or i all-ones bits when only `i` is set.
  std::vector<int> bit_vector() const {
    std::vector<int> v;
    for (char c : bits) {
      if (c == '0' || c == '1') v.push_back(c - '0');
      else if (c != ',' && c != ' ') throw ConfigError("bits: expected a string of 0 and 1");
    }
    if (v.empty() && i) v.assign(*i, 1);
    return v;
  }
};

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T v{};
  in >> v;
  std::string rest;
  if (in.fail() || (in >> rest)) {
    throw ConfigError("config: cannot parse value '" + value + "' for key " + key);
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("config: expected a boolean for key " + key);
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Sets one key. Keys carry their unit (a_um, K_m2s, Tb_s, ...).
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "class") c.diffusion_class = value;
  else if (key == "alpha") c.alpha = parse_number<double>(key, value);
  else if (key == "beta") c.beta = parse_number<double>(key, value);
  else if (key == "K_m2s") c.K_m2s = parse_number<double>(key, value);
  else if (key == "a_um") c.a_um = parse_number<double>(key, value);
  else if (key == "rho_um") c.rho_um = parse_number<double>(key, value);
  else if (key == "lambda_per_s") c.lambda_per_s = parse_number<double>(key, value);
  else if (key == "dim") c.dim = parse_number<int>(key, value);
  else if (key == "N") c.N = static_cast<long>(parse_number<double>(key, value));
  else if (key == "Tb_s") c.Tb_s = parse_number<double>(key, value);
  else if (key == "to_s") c.to_s = parse_number<double>(key, value);
  else if (key == "gamma") c.gamma = parse_number<double>(key, value);
  else if (key == "bits") c.bits = value;
  else if (key == "i") c.i = parse_number<int>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") c.out = value;
  else if (key == "check") c.check = detail::parse_bool(key, value);
  else if (key == "mode") c.mode = value;
  else if (key == "what") c.what = value;
  else if (key == "t_min_s") c.t_min_s = parse_number<double>(key, value);
  else if (key == "t_max_s") c.t_max_s = parse_number<double>(key, value);
  else if (key == "t_points") c.t_points = parse_number<int>(key, value);
  else if (key == "t_scale") c.t_scale = value;
  else if (key == "t_s") c.t_s = parse_number<double>(key, value);
  else if (key == "r_min_um") c.r_min_um = parse_number<double>(key, value);
  else if (key == "r_max_um") c.r_max_um = parse_number<double>(key, value);
  else if (key == "r_points") c.r_points = parse_number<int>(key, value);
  else if (key == "n_min") c.n_min = static_cast<long>(parse_number<double>(key, value));
  else if (key == "n_max") c.n_max = static_cast<long>(parse_number<double>(key, value));
  else if (key == "n_points") c.n_points = parse_number<int>(key, value);
  else if (key == "gamma_max") c.gamma_max = parse_number<int>(key, value);
  else if (key == "trials") c.trials = static_cast<long>(parse_number<double>(key, value));
  else if (key == "samples") c.samples = static_cast<long>(parse_number<double>(key, value));
  else throw ConfigError("config: unknown key '" + key + "'");
  if (key != "out" && key != "check") c.echo[key] = value;
}

/// Reads `key = value` lines; '#' starts a comment.
inline void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

/// Checks ranges that do not depend on the command.
inline void validate(const RunConfig& c) {
  (void)c.link();
  if (c.to_s && !(*c.to_s > 0.0 && *c.to_s <= c.Tb_s)) throw ConfigError("to_s must lie in (0, Tb_s]");
  if (c.gamma && !(*c.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (c.i && *c.i < 1) throw ConfigError("i must be >= 1");
  if (c.t_points < 0 || c.r_points < 0) throw ConfigError("grid sizes must be nonnegative");
  if (c.t_min_s < 0.0 || c.t_max_s < 0.0) throw ConfigError("time bounds must be nonnegative");
  if (c.t_min_s > 0.0 && c.t_max_s > 0.0 && !(c.t_max_s > c.t_min_s)) {
    throw ConfigError("time grid must be increasing (t_max_s > t_min_s)");
  }
  if (c.r_min_um > 0.0 && c.r_max_um > 0.0 && !(c.r_max_um > c.r_min_um)) {
    throw ConfigError("radius grid must be increasing (r_max_um > r_min_um)");
  }
  if (!(c.n_min > 0 && c.n_max > c.n_min && c.n_points >= 2)) {
    throw ConfigError("N grid must be increasing with n_min > 0 and n_points >= 2");
  }
  if (c.t_scale != "log" && c.t_scale != "lin") throw ConfigError("t_scale must be log or lin");
  if (c.trials < 1 || c.samples < 1000) throw ConfigError("need trials >= 1 and samples >= 1000");
  if (c.gamma_max < 0) throw ConfigError("gamma_max must be nonnegative");
  (void)c.bit_vector();
}

}  // namespace fracmol::cli
