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

// The batch commands behind the qwalk-nm executable. Each writes its data
// files and a manifest into config.out.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/io/config.hpp"
#include "qwalk/io/format.hpp"
#include "qwalk/io/manifest.hpp"
#include "qwalk/io/pool.hpp"
#include "qwalk/io/svg.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk::io {

namespace detail {

using Clock = std::chrono::steady_clock;

inline json regime_json(const std::optional<NoiseModel>& noise) {
  if (!noise) return json{{"noise", "none"}, {"label", "noiseless"}};
  const auto r = classify_regime(*noise);
  return json{{"noise", std::string(noise_kind(*noise))},
              {"label", std::string(to_string(r.label))},
              {"discriminant", r.discriminant},
              {"heuristic", r.heuristic}};
}

inline json conventions_json(const ExperimentConfig& c) {
  const auto w = walk_config(c);
  return json{
      {"kraus_step", "rho(n) = sum_i K_i(n) W rho(n-1) W^dagger K_i(n)^dagger, K evaluated at t = n"},
      {"walk_operator", "W = S (C(theta) x I); coin 0 steps left, coin 1 steps right"},
      {"lattice_halfwidth", w.halfwidth()},
      {"entropy_units", "bits"},
      {"td_pair", "(|0> + |1>)/sqrt2 and (|0> - |1>)/sqrt2 at x = 0"},
      {"filter", c.filter},
      {"bands", {{"primary", {c.bands[0], c.bands[1]}}, {"secondary", {c.bands[2], c.bands[3]}}}},
      {"band_intervals", "primary [lo, hi], secondary (lo, hi]"},
      {"peak_rule", "local maximum above median + 3 MAD of in-band power"},
      {"band_area", "trapezoid over bins, df = 1/N"},
      {"monotone_trend_threshold", 0.05},
      {"oun_pln_regime", "heuristic: gamma * dt < 0.1 is non-markovian"}};
}

inline std::vector<double> steps_axis(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
  return t;
}

inline std::string label_for(const std::optional<NoiseModel>& noise) {
  if (!noise) return "noiseless";
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RtnNoise>)
          return "rtn_a=" + format_double(p.a) + "_gamma=" + format_double(p.gamma);
        else if constexpr (std::is_same_v<T, OunNoise>)
          return "oun_Gamma=" + format_double(p.Gamma) + "_gamma=" + format_double(p.gamma);
        else
          return "pln_Gamma=" + format_double(p.Gamma) + "_gamma=" + format_double(p.gamma);
      },
      *noise);
}

struct WalkTrace {
  std::vector<std::vector<double>> distribution;
  std::vector<double> mean, variance, mutual_information;
};

inline WalkTrace trace_walk(const WalkConfig& cfg, const std::optional<NoiseModel>& noise,
                            bool with_mi) {
  WalkTrace tr;
  const auto lat = cfg.lattice();
  run_walk(cfg, noise, [&](int, const DensityOperator& rho) {
    auto p = position_distribution(rho);
    tr.mean.push_back(mean_position(p, lat));
    tr.variance.push_back(variance(p, lat));
    if (with_mi) tr.mutual_information.push_back(mutual_information(rho));
    tr.distribution.push_back(std::move(p));
  });
  return tr;
}

inline double final_variance(const WalkConfig& cfg, const std::optional<NoiseModel>& noise) {
  double v = 0.0;
  run_walk(cfg, noise, [&](int n, const DensityOperator& rho) {
    if (n == cfg.steps) v = variance(position_distribution(rho), cfg.lattice());
  });
  return v;
}

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace detail

struct CommandResult {
  std::filesystem::path out;
};

// ---------------------------------------------------------------------------

inline CommandResult cmd_walk(const ExperimentConfig& c) {
  validate(c);
  const auto t0 = detail::Clock::now();
  const auto cfg = walk_config(c);
  const auto noise = noise_model(c.noise);
  const auto lat = cfg.lattice();

  struct Job {
    detail::WalkTrace trace;
    std::vector<DensityOperator> coin;
  };
  const std::size_t jobs = c.paired ? 3 : 1;
  auto results = parallel_map(jobs, resolve_threads(c.threads), [&](std::size_t i) {
    Job j;
    if (i == 0) {
      j.trace = detail::trace_walk(cfg, noise, true);
    } else {
      auto pc = cfg;
      pc.initial_coin = i == 1 ? coins::plus() : coins::minus();
      j.coin = reduced_coin_run(pc, noise);
    }
    return j;
  });
  const auto& tr = results[0].trace;
  std::optional<TimeSeries> td;
  if (c.paired) {
    PairedRun pr{std::move(results[1].coin), std::move(results[2].coin), metadata_for(cfg, noise)};
    td = trace_distance_series(pr);
  }

  OutputDir out(c.out);
  const std::size_t n = tr.variance.size();

  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < lat.size(); ++i) header.push_back(std::to_string(lat.position(i)));
  CsvWriter dist(header);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> row{static_cast<double>(t)};
    row.insert(row.end(), tr.distribution[t].begin(), tr.distribution[t].end());
    dist.row(row);
  }
  out.write("distribution.csv", dist.str());

  CsvWriter var({"t", "mean", "variance", "classical"});
  for (std::size_t t = 0; t < n; ++t)
    var.row(std::vector<double>{static_cast<double>(t), tr.mean[t], tr.variance[t],
                                classical_walk_variance(static_cast<int>(t))});
  out.write("variance.csv", var.str());

  std::vector<std::string> obs_header{"t", "decoherence"};
  if (td) obs_header.push_back("trace_distance");
  obs_header.push_back("mutual_information");
  CsvWriter obs(obs_header);
  std::vector<double> decoherence(n, 1.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (noise) decoherence[t] = decoherence_factor(*noise, static_cast<double>(t));
    std::vector<double> row{static_cast<double>(t), decoherence[t]};
    if (td) row.push_back(td->values[t]);
    row.push_back(tr.mutual_information[t]);
    obs.row(row);
  }
  out.write("observables.csv", obs.str());

  if (c.plots) {
    const auto ts = detail::steps_axis(n);
    std::vector<double> xs, ps;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      // The walker sits on sites of the parity of T; the others are empty.
      const int x = lat.position(i);
      if (((x - cfg.initial_position - cfg.steps) % 2 + 2) % 2) continue;
      xs.push_back(x);
      ps.push_back(tr.distribution.back()[i]);
    }
    LinePlot pd{"P(x) at t = " + std::to_string(cfg.steps), "x", "P(x)", false,
                {{detail::label_for(noise), xs, ps}}};
    out.write("distribution.svg", pd.render());

    std::vector<double> classical(n);
    for (std::size_t t = 0; t < n; ++t) classical[t] = static_cast<double>(t);
    LinePlot pv{"variance", "t", "sigma^2", false,
                {{detail::label_for(noise), ts, tr.variance}, {"classical", ts, classical, true}}};
    out.write("variance.svg", pv.render());

    LinePlot po{"observables", "t", "value", false,
                {{"mutual information (bits)", ts, tr.mutual_information},
                 {"decoherence factor", ts, decoherence, true}}};
    if (td) po.series.insert(po.series.begin(), PlotSeries{"trace distance", ts, td->values});
    out.write("observables.svg", po.render());
  }

  RunManifest m;
  m.command = "walk";
  m.config = c;
  m.regime = json::array({detail::regime_json(noise)});
  m.conventions = detail::conventions_json(c);
  m.seed = seed_from_environment();
  m.wall_time_seconds = detail::seconds_since(t0);
  out.write_manifest(m);
  return {out.root()};
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_sweep_variance(const ExperimentConfig& c) {
  validate(c);
  const auto t0 = detail::Clock::now();
  const auto cfg = walk_config(c);
  const std::vector<double> gammas = c.gammas.empty() ? std::vector<double>{c.noise.gamma} : c.gammas;

  struct Point {
    double a, gamma;
    std::optional<NoiseModel> noise;
  };
  std::vector<Point> points;
  for (double g : gammas)
    for (double a : c.a_grid) points.push_back({a, g, noise_model(c.noise, a, g)});

  // Index 0 is the noiseless reference.
  auto variances = parallel_map(points.size() + 1, resolve_threads(c.threads), [&](std::size_t i) {
    return detail::final_variance(cfg, i == 0 ? std::nullopt : points[i - 1].noise);
  });
  const double noiseless = variances[0];
  const double classical = classical_walk_variance(cfg.steps);

  OutputDir out(c.out);
  CsvWriter csv({"a", "gamma", "variance", "classical", "noiseless", "regime"});
  json regimes = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string regime =
        p.noise ? std::string(to_string(classify_regime(*p.noise).label)) : "noiseless";
    csv.row({format_double(p.a), format_double(p.gamma), format_double(variances[i + 1]),
             format_double(classical), format_double(noiseless), regime});
    auto r = detail::regime_json(p.noise);
    r["a"] = p.a;
    r["gamma"] = p.gamma;
    regimes.push_back(r);
  }
  out.write("variance_vs_a.csv", csv.str());

  LinePlot plot{"variance at t = " + std::to_string(cfg.steps) + " against RTN amplitude", "a",
                "sigma^2", true, {}};
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    PlotSeries s{"gamma = " + format_double(gammas[k]), {}, {}};
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].gamma == gammas[k]) {
        s.x.push_back(points[i].a);
        s.y.push_back(variances[i + 1]);
      }
    plot.series.push_back(std::move(s));
  }
  const double a_lo = *std::min_element(c.a_grid.begin(), c.a_grid.end());
  const double a_hi = *std::max_element(c.a_grid.begin(), c.a_grid.end());
  plot.series.push_back({"classical", {a_lo, a_hi}, {classical, classical}, true});
  plot.series.push_back({"noiseless", {a_lo, a_hi}, {noiseless, noiseless}, true});
  out.write("plot.svg", plot.render());

  RunManifest m;
  m.command = "sweep-variance";
  m.config = c;
  m.regime = regimes;
  m.conventions = detail::conventions_json(c);
  m.seed = seed_from_environment();
  m.wall_time_seconds = detail::seconds_since(t0);
  out.write_manifest(m);
  return {out.root()};
}

// ---------------------------------------------------------------------------

inline TimeSeries compute_series(const std::string& kind, const WalkConfig& cfg,
                                 const std::optional<NoiseModel>& noise) {
  if (kind == "td") return trace_distance_series(paired_coin_run(cfg, noise));
  TimeSeries s{kind == "mi" ? "mutual_information" : "variance", {}, metadata_for(cfg, noise)};
  const auto lat = cfg.lattice();
  run_walk(cfg, noise, [&](int, const DensityOperator& rho) {
    s.values.push_back(kind == "mi" ? mutual_information(rho)
                                    : variance(position_distribution(rho), lat));
  });
  return s;
}

inline CommandResult cmd_spectrum(const ExperimentConfig& c) {
  validate(c);
  const auto t0 = detail::Clock::now();
  const auto opt = spectral_options(c);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> series;
  json regimes = json::array();
  if (!c.input.empty()) {
    const auto table = parse_csv(read_text_file(c.input));
    std::vector<double> v;
    for (const auto& row : table.rows) v.push_back(row.back());
    if (v.size() < 8) throw UsageError("spectrum needs at least 8 samples, input has " +
                                       std::to_string(v.size()));
    labels.push_back(table.header.back());
    series.push_back(std::move(v));
  } else {
    const auto cfg = walk_config(c);
    std::vector<std::optional<NoiseModel>> runs;
    if (c.include_noiseless || c.noise.kind == "none") runs.push_back(std::nullopt);
    if (c.noise.kind != "none") {
      const std::vector<double> gammas =
          c.gammas.empty() ? std::vector<double>{c.noise.gamma} : c.gammas;
      for (double g : gammas) runs.push_back(noise_model(c.noise, std::nullopt, g));
    }
    auto computed = parallel_map(runs.size(), resolve_threads(c.threads), [&](std::size_t i) {
      return compute_series(c.series, cfg, runs[i]);
    });
    for (std::size_t i = 0; i < runs.size(); ++i) {
      labels.push_back(detail::label_for(runs[i]));
      series.push_back(std::move(computed[i].values));
      regimes.push_back(detail::regime_json(runs[i]));
    }
  }

  const std::size_t n = series.front().size();
  std::vector<Detrended> trends;
  std::vector<SpectrumResult> spectra;
  for (const auto& s : series) {
    trends.push_back(detrend(s, opt.filter));
    spectra.push_back(filtered_spectrum(s, opt));
  }

  OutputDir out(c.out);
  std::vector<std::string> h_series{"t"}, h_fit{"t"}, h_spec{"k", "f"};
  for (const auto& l : labels) {
    h_series.push_back(l);
    h_fit.push_back(l + "_trend");
    h_fit.push_back(l + "_residual");
    h_spec.push_back(l);
  }
  CsvWriter cs(h_series), cf(h_fit), cp(h_spec);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> rs{static_cast<double>(t)}, rf{static_cast<double>(t)};
    std::vector<double> rp{static_cast<double>(t), spectra[0].frequencies[t]};
    for (std::size_t r = 0; r < series.size(); ++r) {
      rs.push_back(series[r][t]);
      rf.push_back(trends[r].trend[t]);
      rf.push_back(trends[r].residual[t]);
      rp.push_back(spectra[r].power[t]);
    }
    cs.row(rs);
    cf.row(rf);
    cp.row(rp);
  }
  out.write("series.csv", cs.str());
  out.write("mfbf.csv", cf.str());
  out.write("spectrum.csv", cp.str());

  json runs_json = json::array();
  for (std::size_t r = 0; r < series.size(); ++r) {
    const auto& s = spectra[r];
    json peaks = json::array();
    for (const auto& p : s.peaks)
      peaks.push_back({{"frequency", p.frequency}, {"power", p.power}, {"bin", p.bin}, {"band", p.band}});
    const auto ratio = band_power_ratio(s, opt.primary, opt.secondary);
    runs_json.push_back({{"label", labels[r]},
                         {"samples", n},
                         {"peaks", peaks},
                         {"primary_area", s.primary_area},
                         {"secondary_area", s.secondary_area},
                         {"band_power_ratio", ratio.secondary_empty ? json(nullptr) : json(ratio.ratio)},
                         {"secondary_empty", ratio.secondary_empty},
                         {"monotone_trend", residual_power_fraction(series[r]) < 0.05}});
  }
  const json peaks_doc{{"series", c.input.empty() ? c.series : "input"},
                       {"filter", to_string(opt.filter)},
                       {"bands",
                        {{"primary", {opt.primary.lo, opt.primary.hi}},
                         {"secondary", {opt.secondary.lo, opt.secondary.hi}}}},
                       {"runs", runs_json}};
  out.write("peaks.json", peaks_doc.dump(2) + "\n");

  LinePlot plot{"power spectrum of the filtered " + (c.input.empty() ? c.series : std::string("input")) +
                    " series",
                "f (cycles/step)", "S(f)", false, {}};
  for (std::size_t r = 0; r < series.size(); ++r) {
    PlotSeries ps{labels[r], {}, {}};
    for (std::size_t k = 1; k < n && spectra[r].frequencies[k] <= 0.5; ++k) {
      ps.x.push_back(spectra[r].frequencies[k]);
      ps.y.push_back(spectra[r].power[k]);
    }
    plot.series.push_back(std::move(ps));
  }
  out.write("plot.svg", plot.render());

  RunManifest m;
  m.command = "spectrum";
  m.config = c;
  m.regime = regimes;
  m.conventions = detail::conventions_json(c);
  m.seed = seed_from_environment();
  m.wall_time_seconds = detail::seconds_since(t0);
  out.write_manifest(m);
  return {out.root()};
}

// ---------------------------------------------------------------------------

struct SelftestReport {
  json doc;
  bool ok = true;
};

/// Quick kernel checks, plus a manifest audit of `dir` when given.
inline SelftestReport cmd_selftest(const std::optional<std::filesystem::path>& dir) {
  SelftestReport rep;
  json checks = json::array();
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    rep.ok = rep.ok && ok;
  };
  auto guarded = [&](const std::string& name, auto&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      check(name, false, e.what());
    }
  };

  guarded("kraus-completeness", [&] {
    double worst = 0.0;
    const NoiseModel models[] = {RtnNoise{0.05, 0.001}, RtnNoise{0.4, 5.0}, OunNoise{0.1, 0.01},
                                 PlnNoise{0.1, 0.01}};
    for (const auto& m : models)
      for (int t = 1; t <= 100; ++t) worst = std::max(worst, kraus_at(m, t).completeness_residual());
    check("kraus-completeness", worst <= 1e-10, "max residual " + format_double(worst));
  });
  guarded("hadamard-three-steps", [&] {
    WalkConfig cfg;
    cfg.steps = 3;
    cfg.initial_coin = {1.0, 0.0};
    std::vector<double> p;
    run_walk(cfg, std::nullopt, [&](int n, const DensityOperator& rho) {
      if (n == 3) p = position_distribution(rho);
    });
    const auto lat = cfg.lattice();
    const double expect[] = {0.125, 0.625, 0.125, 0.125};
    double err = 0.0;
    for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(p[lat.index(-3 + 2 * k)] - expect[k]));
    check("hadamard-three-steps", err <= 1e-12, "max error " + format_double(err));
  });
  guarded("mfbf", [&] {
    const auto r = mfbf(std::vector<double>{1.0, 0.0, 1.0});
    const bool ok = r.fitted == std::vector<double>{1.0, 0.5, 0.5};
    check("mfbf", ok, "fit of [1, 0, 1]");
  });
  guarded("power-spectrum", [&] {
    std::vector<double> x(100);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(2 * std::numbers::pi * 5 * i / 100.0);
    const auto s = power_spectrum(x);
    check("power-spectrum", std::abs(s.power[5] - 2500.0) <= 1e-9 && std::abs(s.power[95] - 2500.0) <= 1e-9,
          "S(5) = " + format_double(s.power[5]));
  });
  guarded("sha256", [&] {
    check("sha256",
          sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad",
          "digest of \"abc\"");
  });

  rep.doc["checks"] = checks;
  if (dir) {
    const auto audit = audit_manifest(*dir);
    rep.doc["audit"] = {{"directory", dir->string()}, {"files_checked", audit.checked}, {"problems", audit.problems}};
    rep.ok = rep.ok && audit.ok();
  }
  rep.doc["ok"] = rep.ok;
  return rep;
}

}  // namespace qwalk::io
