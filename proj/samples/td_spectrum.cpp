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

// Trace distance between the walks started from the +/- coin states, its
// monotone falling best fit, and the peaks left in the residual spectrum.

#include <cstdio>
#include <cstdlib>

#include "qwalk/qwalk.hpp"

int main(int argc, char** argv) {
  using namespace qwalk;
  const double gamma = argc > 1 ? std::atof(argv[1]) : 0.001;
  WalkConfig cfg;
  cfg.steps = 99;  // N = 100 samples

  const auto td = trace_distance_series(paired_coin_run(cfg, NoiseModel{RtnNoise{0.05, gamma}}));
  std::printf("BLP backflow: %g\n", blp_backflow(td));

  const auto s = filtered_spectrum(td);
  std::printf("band areas: primary %g, secondary %g\n", s.primary_area, s.secondary_area);
  for (const auto& p : s.peaks)
    std::printf("peak %-9s f = %.2f  S = %g\n", p.band.c_str(), p.frequency, p.power);
  if (s.peaks.empty()) std::printf("no peaks above median + 3 MAD\n");
}
