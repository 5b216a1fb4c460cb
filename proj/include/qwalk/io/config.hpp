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

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/errors.hpp"
#include "qwalk/io/format.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct NoiseSpec {
  std::string kind = "none";  // none | rtn | oun | pln
  double a = 0.05;
  double gamma = 0.001;
  double Gamma = 0.1;
  double alpha = 3.0;

  bool operator==(const NoiseSpec&) const = default;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string command = "walk";  // walk | sweep-variance | spectrum

  int steps = 100;
  double coin_theta = std::numbers::pi / 4;
  std::string coin_init = "symmetric";
  int initial_position = 0;
  std::optional<int> halfwidth;

  NoiseSpec noise;
  bool paired = false;

  std::string series = "td";
  std::string filter = "mfbf";
  std::array<double, 4> bands{0.2, 0.35, 0.0, 0.1};  // p_lo, p_hi, s_lo, s_hi

  std::vector<double> a_grid;
  std::vector<double> gammas;
  bool include_noiseless = false;
  std::string input;  // spectrum of an existing series instead of a walk

  std::string out = "out";
  bool plots = false;
  int threads = 0;  // 0: available parallelism

  bool operator==(const ExperimentConfig&) const = default;
};

/// plus | minus | symmetric | custom:re0,im0,re1,im1
inline CoinState parse_coin(const std::string& text) {
  if (text == "plus") return coins::plus();
  if (text == "minus") return coins::minus();
  if (text == "symmetric") return coins::symmetric();
  if (text.rfind("custom:", 0) == 0) {
    const auto v = parse_double_list(std::string_view(text).substr(7));
    if (v.size() != 4) throw UsageError("custom coin needs four numbers re0,im0,re1,im1");
    return {complex(v[0], v[1]), complex(v[2], v[3])};
  }
  throw UsageError("unknown coin '" + text + "'");
}

inline WalkConfig walk_config(const ExperimentConfig& c) {
  WalkConfig w;
  w.steps = c.steps;
  w.coin_angle = c.coin_theta;
  w.initial_coin = parse_coin(c.coin_init);
  w.initial_position = c.initial_position;
  w.lattice_halfwidth = c.halfwidth;
  return w;
}

/// The noise model with optional overrides of the amplitude or rate that a
/// sweep varies. An RTN amplitude of exactly zero is the noiseless walk.
inline std::optional<NoiseModel> noise_model(const NoiseSpec& n,
                                             std::optional<double> a = std::nullopt,
                                             std::optional<double> gamma = std::nullopt) {
  const double g = gamma.value_or(n.gamma);
  if (n.kind == "none") return std::nullopt;
  if (n.kind == "rtn") {
    const double amp = a.value_or(n.a);
    if (amp == 0.0) return std::nullopt;
    return RtnNoise{amp, g};
  }
  if (n.kind == "oun") return OunNoise{n.Gamma, g};
  if (n.kind == "pln") return PlnNoise{n.Gamma, g, n.alpha};
  throw UsageError("unknown noise '" + n.kind + "'");
}

inline SpectralOptions spectral_options(const ExperimentConfig& c) {
  SpectralOptions o;
  if (c.filter == "mfbf") o.filter = FilterKind::Mfbf;
  else if (c.filter == "expfit") o.filter = FilterKind::ExpFit;
  else throw UsageError("unknown filter '" + c.filter + "'");
  o.primary = primary_band(c.bands[0], c.bands[1]);
  o.secondary = secondary_band(c.bands[2], c.bands[3]);
  return o;
}

/// Every check that can fail before a run starts.
inline void validate(const ExperimentConfig& c) {
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
  if (c.command != "walk" && c.command != "sweep-variance" && c.command != "spectrum")
    throw UsageError("unknown command '" + c.command + "'");
  if (c.series != "td" && c.series != "mi" && c.series != "variance")
    throw UsageError("unknown series '" + c.series + "'");
  if (c.threads < 0) throw UsageError("threads must be >= 0");
  const auto opt = spectral_options(c);
  require_disjoint(opt.primary, opt.secondary);

  if (c.command == "spectrum" && !c.input.empty()) return;

  validate(walk_config(c));
  if (c.noise.kind != "none" && c.noise.kind != "rtn" && c.noise.kind != "oun" &&
      c.noise.kind != "pln")
    throw UsageError("unknown noise '" + c.noise.kind + "'");
  std::vector<double> gammas = c.gammas.empty() ? std::vector<double>{c.noise.gamma} : c.gammas;

  if (c.command == "sweep-variance") {
    if (c.noise.kind != "rtn") throw UsageError("sweep-variance varies the RTN amplitude; use --noise rtn");
    if (c.a_grid.empty()) throw UsageError("sweep-variance needs a non-empty amplitude grid");
    for (double a : c.a_grid)
      if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("amplitudes must be finite and >= 0");
    for (double g : gammas)
      for (double a : c.a_grid)
        if (auto m = noise_model(c.noise, a, g)) validate(*m);
    return;
  }
  if (c.command == "spectrum" && c.steps + 1 < 8)
    throw UsageError("spectrum needs at least 8 samples (steps >= 7)");
  for (double g : gammas)
    if (auto m = noise_model(c.noise, std::nullopt, g)) validate(*m);
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(json& j, const NoiseSpec& n) {
  j = json{{"kind", n.kind}, {"a", n.a}, {"gamma", n.gamma}, {"Gamma", n.Gamma}, {"alpha", n.alpha}};
}

inline void from_json(const json& j, NoiseSpec& n) {
  n.kind = j.value("kind", n.kind);
  n.a = j.value("a", n.a);
  n.gamma = j.value("gamma", n.gamma);
  n.Gamma = j.value("Gamma", n.Gamma);
  n.alpha = j.value("alpha", n.alpha);
}

inline void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"schema_version", c.schema_version},
           {"command", c.command},
           {"steps", c.steps},
           {"coin_theta", c.coin_theta},
           {"coin_init", c.coin_init},
           {"initial_position", c.initial_position},
           {"halfwidth", c.halfwidth ? json(*c.halfwidth) : json(nullptr)},
           {"noise", c.noise},
           {"paired", c.paired},
           {"series", c.series},
           {"filter", c.filter},
           {"bands", c.bands},
           {"a_grid", c.a_grid},
           {"gammas", c.gammas},
           {"include_noiseless", c.include_noiseless},
           {"input", c.input},
           {"out", c.out},
           {"plots", c.plots},
           {"threads", c.threads}};
}

inline void from_json(const json& j, ExperimentConfig& c) {
  static const char* known[] = {"schema_version", "command", "steps", "coin_theta", "coin_init",
                                "initial_position", "halfwidth", "noise", "paired", "series",
                                "filter", "bands", "a_grid", "gammas", "include_noiseless",
                                "input", "out", "plots", "threads"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + key + "'");
  }
  c.schema_version = j.value("schema_version", c.schema_version);
  c.command = j.value("command", c.command);
  c.steps = j.value("steps", c.steps);
  c.coin_theta = j.value("coin_theta", c.coin_theta);
  c.coin_init = j.value("coin_init", c.coin_init);
  c.initial_position = j.value("initial_position", c.initial_position);
  if (j.contains("halfwidth") && !j.at("halfwidth").is_null())
    c.halfwidth = j.at("halfwidth").get<int>();
  if (j.contains("noise")) c.noise = j.at("noise").get<NoiseSpec>();
  c.paired = j.value("paired", c.paired);
  c.series = j.value("series", c.series);
  c.filter = j.value("filter", c.filter);
  c.bands = j.value("bands", c.bands);
  c.a_grid = j.value("a_grid", c.a_grid);
  c.gammas = j.value("gammas", c.gammas);
  c.include_noiseless = j.value("include_noiseless", c.include_noiseless);
  c.input = j.value("input", c.input);
  c.out = j.value("out", c.out);
  c.plots = j.value("plots", c.plots);
  c.threads = j.value("threads", c.threads);
}

/// Accepts a bare config or a run manifest (uses its "config" member).
inline ExperimentConfig parse_config(const std::string& text) {
  try {
    auto j = json::parse(text);
    if (j.contains("config") && j.contains("files")) j = j.at("config");
    return j.get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

}  // namespace qwalk::io
