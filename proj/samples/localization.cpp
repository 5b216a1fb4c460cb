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

// Variance after 100 steps: noiseless, Markovian RTN and strongly
// non-Markovian RTN, against the classical random walk.

#include <cstdio>
#include <optional>

#include "qwalk/qwalk.hpp"

int main() {
  using namespace qwalk;
  WalkConfig cfg;  // Hadamard coin, symmetric initial coin, T = 100
  const std::optional<NoiseModel> runs[] = {std::nullopt, RtnNoise{0.4, 5.0}, RtnNoise{1.0, 0.001}};
  const char* names[] = {"noiseless", "rtn a=0.4 gamma=5", "rtn a=1 gamma=0.001"};

  std::printf("classical variance: %g\n", classical_walk_variance(cfg.steps));
  for (int i = 0; i < 3; ++i) {
    double var = 0.0;
    run_walk(cfg, runs[i], [&](int n, const DensityOperator& rho) {
      if (n == cfg.steps) var = variance(position_distribution(rho), cfg.lattice());
    });
    std::printf("%-22s variance %8.2f", names[i], var);
    if (runs[i]) std::printf("  (%s)", std::string(to_string(classify_regime(*runs[i]).label)).c_str());
    std::printf("\n");
  }
}
