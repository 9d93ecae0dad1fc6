// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
//
// fracmol: command-line front end.
//
//   fracmol nob|peaktime|pdf|ber|simulate [flags]
//   fracmol reproduce fig2|fig3|fig4|fig5|fig6|fig7|table1|all [--out DIR] [--check]
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure,
// 4 failed landmark in reproduce --check.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "fracmol/cli/commands.hpp"
#include "fracmol/cli/config.hpp"
#include "fracmol/error.hpp"

namespace {

using fracmol::cli::RunConfig;
using fracmol::cli::Table;

int run(const std::string& command, const std::string& target, const std::string& config_path,
        const std::vector<std::pair<std::string, std::string>>& settings) {
  RunConfig cfg;
  if (!config_path.empty()) fracmol::cli::load_config_file(cfg, config_path);
  for (const auto& [k, v] : settings) fracmol::cli::apply_setting(cfg, k, v);
  fracmol::cli::validate(cfg);

  if (command == "reproduce") {
    const auto checks =
        fracmol::cli::reproduce(target.empty() ? "all" : target, cfg.out, fracmol::cli::Setup::from(cfg));
    bool ok = true;
    for (const auto& c : checks) {
      if (cfg.check) std::cout << c << '\n';
      ok = ok && c.pass;
    }
    return cfg.check && !ok ? 4 : 0;
  }
  if (!target.empty()) throw fracmol::cli::ConfigError("unexpected argument '" + target + "'");

  Table table;
  if (command == "nob") table = fracmol::cli::cmd_nob(cfg, std::cerr);
  else if (command == "peaktime") table = fracmol::cli::cmd_peaktime(cfg, std::cerr);
  else if (command == "pdf") table = fracmol::cli::cmd_pdf(cfg, std::cerr);
  else if (command == "ber") table = fracmol::cli::cmd_ber(cfg, std::cerr);
  else table = fracmol::cli::cmd_simulate(cfg, std::cerr);
  if (cfg.out.empty()) table.write(std::cout);
  else table.write_file(cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molecular communication over fractional diffusion channels"};
  app.set_version_flag("--version", "fracmol 0.1.0");

  std::string command;
  std::string target;
  std::string config_path;
  app.add_option("command", command, "nob | peaktime | pdf | ber | simulate | reproduce")
      ->required()
      ->check(CLI::IsMember({"nob", "peaktime", "pdf", "ber", "simulate", "reproduce"}));
  app.add_option("target", target, "reproduce target: fig2..fig7, table1 or all");
  app.add_option("--config", config_path, "key = value file; flags override it")->check(CLI::ExistingFile);

  // flag name -> config key; values are parsed by apply_setting
  const std::vector<std::pair<std::string, std::string>> flags{
      {"--class", "class"},         {"--alpha", "alpha"},       {"--beta", "beta"},
      {"--K", "K_m2s"},             {"--a-um", "a_um"},         {"--rho-um", "rho_um"},
      {"--lambda", "lambda_per_s"}, {"--dim", "dim"},           {"--N", "N"},
      {"--Tb", "Tb_s"},             {"--to", "to_s"},           {"--gamma", "gamma"},
      {"--bits", "bits"},           {"--i", "i"},               {"--seed", "seed"},
      {"--out", "out"},             {"--mode", "mode"},         {"--what", "what"},
      {"--t-min", "t_min_s"},       {"--t-max", "t_max_s"},     {"--t-points", "t_points"},
      {"--t-scale", "t_scale"},     {"--t", "t_s"},             {"--r-min", "r_min_um"},
      {"--r-max", "r_max_um"},      {"--r-points", "r_points"}, {"--n-min", "n_min"},
      {"--n-max", "n_max"},         {"--n-points", "n_points"}, {"--gamma-max", "gamma_max"},
      {"--trials", "trials"},       {"--samples", "samples"},
  };
  std::vector<std::string> values(flags.size());
  for (std::size_t k = 0; k < flags.size(); ++k) {
    app.add_option(flags[k].first, values[k], "config key " + flags[k].second);
  }
  bool check = false;
  app.add_flag("--check", check, "compare reproduce output with reference landmarks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::pair<std::string, std::string>> settings;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (app.count(flags[k].first) > 0) settings.emplace_back(flags[k].second, values[k]);
  }
  if (check) settings.emplace_back("check", "1");

  try {
    return run(command, target, config_path, settings);
  } catch (const fracmol::NumericError& e) {
    std::cerr << "fracmol: numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const fracmol::DomainError& e) {
    std::cerr << "fracmol: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fracmol: " << e.what() << '\n';
    return 3;
  }
}
