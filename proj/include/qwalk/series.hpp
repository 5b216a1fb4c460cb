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

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct RunMetadata {
  std::optional<NoiseModel> noise;
  CoinState coin{};
  double coin_angle = std::numbers::pi / 4;
  int steps = 0;
};

/// One value per step 0..T.
struct TimeSeries {
  std::string name;
  std::vector<double> values;
  RunMetadata metadata;
};

inline RunMetadata metadata_for(const WalkConfig& cfg,
                                const std::optional<NoiseModel>& noise) {
  return {noise, cfg.initial_coin, cfg.coin_angle, cfg.steps};
}

inline void validate(const TimeSeries& s) {
  if (s.values.size() != static_cast<std::size_t>(s.metadata.steps) + 1)
    throw IntegrityError("series '" + s.name + "' has " +
                         std::to_string(s.values.size()) + " values for " +
                         std::to_string(s.metadata.steps) + " steps");
  for (double v : s.values)
    if (!std::isfinite(v))
      throw IntegrityError("series '" + s.name + "' has a non-finite value");
}

}  // namespace qwalk
