// Copyright 2026 The qwalk-nm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end: parses flags into an ExperimentConfig and runs the
// selected command. Errors go to `err` as one JSON object.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io/commands.hpp"
#include "qwalk/io/config.hpp"

namespace qwalk::io {

inline std::string error_json(const std::string& kind, const std::string& message, int code) {
  return json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump();
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Noisy discrete-time quantum walks: simulation, non-Markovianity witnesses "
               "and spectral analysis",
               "qwalk-nm"};
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig cli;
  std::string config_file, bands, a_grid, gammas;
  app.add_option("--config", config_file, "JSON config (or a previous manifest.json)");
  auto* o_noise = app.add_option("--noise", cli.noise.kind, "noise model")
                      ->check(CLI::IsMember({"none", "rtn", "oun", "pln"}));
  auto* o_a = app.add_option("--a", cli.noise.a, "RTN coupling amplitude");
  auto* o_gamma = app.add_option("--gamma", cli.noise.gamma, "switching rate / bandwidth");
  auto* o_Gamma = app.add_option("--Gamma", cli.noise.Gamma, "OUN/PLN relaxation rate");
  auto* o_alpha = app.add_option("--alpha", cli.noise.alpha, "PLN exponent (only 3)");
  auto* o_steps = app.add_option("--steps", cli.steps, "number of walk steps T");
  auto* o_theta = app.add_option("--coin-theta", cli.coin_theta, "coin angle (pi/4: Hadamard)");
  auto* o_coin = app.add_option("--coin-init", cli.coin_init,
                                "plus | minus | symmetric | custom:re0,im0,re1,im1");
  auto* o_x0 = app.add_option("--x0", cli.initial_position, "initial site");
  auto* o_hw = app.add_option("--halfwidth", cli.halfwidth, "lattice halfwidth");
  auto* o_paired = app.add_flag("--paired", cli.paired, "also run the +/- coin pair (trace distance)");
  auto* o_series = app.add_option("--series", cli.series, "series for the spectrum")
                       ->check(CLI::IsMember({"td", "mi", "variance"}));
  auto* o_filter = app.add_option("--filter", cli.filter, "trend filter")
                       ->check(CLI::IsMember({"mfbf", "expfit"}));
  auto* o_bands = app.add_option("--bands", bands, "p_lo,p_hi,s_lo,s_hi");
  auto* o_grid = app.add_option("--a-grid", a_grid, "comma-separated RTN amplitudes");
  auto* o_gammas = app.add_option("--gammas", gammas, "comma-separated rates, one run or curve each");
  auto* o_noiseless = app.add_flag("--include-noiseless", cli.include_noiseless,
                                   "add the noiseless walk to a spectrum comparison");
  auto* o_input = app.add_option("--input", cli.input, "CSV series (last column) to analyse");
  auto* o_out = app.add_option("--out", cli.out, "output directory");
  auto* o_plots = app.add_flag("--plots", cli.plots, "emit SVG plots");
  auto* o_threads = app.add_option("--threads", cli.threads, "worker threads (0: all cores)");

  app.add_subcommand("walk", "evolve one walk; distribution, variance and observables");
  app.add_subcommand("sweep-variance", "final variance over a grid of RTN amplitudes");
  app.add_subcommand("spectrum", "filtered power spectrum of a TD, MI or variance series");
  auto* selftest = app.add_subcommand("selftest", "kernel checks and manifest audit");
  std::string audit_dir;
  selftest->add_option("--audit", audit_dir, "output directory whose manifest to verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what(), 2) << '\n';
    return 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    if (command == "selftest") {
      const auto rep = cmd_selftest(audit_dir.empty() ? std::nullopt
                                                      : std::optional<std::filesystem::path>(audit_dir));
      out << rep.doc.dump(2) << '\n';
      if (!rep.ok) {
        err << error_json("integrity", "selftest failed", 4) << '\n';
        return 4;
      }
      return 0;
    }

    ExperimentConfig cfg;
    if (!config_file.empty()) cfg = parse_config(read_text_file(config_file));
    cfg.command = command;
    // Flags given on the command line override the config file.
    auto given = [](const CLI::Option* o) { return o->count() > 0; };
    if (given(o_noise)) cfg.noise.kind = cli.noise.kind;
    if (given(o_a)) cfg.noise.a = cli.noise.a;
    if (given(o_gamma)) cfg.noise.gamma = cli.noise.gamma;
    if (given(o_Gamma)) cfg.noise.Gamma = cli.noise.Gamma;
    if (given(o_alpha)) cfg.noise.alpha = cli.noise.alpha;
    if (given(o_steps)) cfg.steps = cli.steps;
    if (given(o_theta)) cfg.coin_theta = cli.coin_theta;
    if (given(o_coin)) cfg.coin_init = cli.coin_init;
    if (given(o_x0)) cfg.initial_position = cli.initial_position;
    if (given(o_hw)) cfg.halfwidth = cli.halfwidth;
    if (given(o_paired)) cfg.paired = cli.paired;
    if (given(o_series)) cfg.series = cli.series;
    if (given(o_filter)) cfg.filter = cli.filter;
    if (given(o_bands)) {
      const auto b = parse_double_list(bands);
      if (b.size() != 4) throw UsageError("--bands needs four numbers p_lo,p_hi,s_lo,s_hi");
      cfg.bands = {b[0], b[1], b[2], b[3]};
    }
    if (given(o_grid)) cfg.a_grid = parse_double_list(a_grid);
    if (given(o_gammas)) cfg.gammas = parse_double_list(gammas);
    if (given(o_noiseless)) cfg.include_noiseless = cli.include_noiseless;
    if (given(o_input)) cfg.input = cli.input;
    if (given(o_out)) cfg.out = cli.out;
    if (given(o_plots)) cfg.plots = cli.plots;
    if (given(o_threads)) cfg.threads = cli.threads;

    CommandResult r;
    if (command == "walk") r = cmd_walk(cfg);
    else if (command == "sweep-variance") r = cmd_sweep_variance(cfg);
    else r = cmd_spectrum(cfg);
    out << json{{"command", command}, {"out", r.out.string()}, {"manifest", (r.out / kManifestName).string()}}.dump()
        << '\n';
    return 0;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    err << error_json(to_string(e.kind()), e.what(), code) << '\n';
    return code;
  } catch (const json::exception& e) {
    err << error_json("config", e.what(), 3) << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << error_json("integrity", e.what(), 4) << '\n';
    return 4;
  }
}

}  // namespace qwalk::io
