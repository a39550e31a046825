// Copyright 2026 The rexl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rexl/environment/policies.hpp"

#include <algorithm>

#include "rexl/core/error.hpp"

namespace rexl {

namespace {

int lowest_unmasked(const Environment& env) {
  const auto& mask = env.state().mask;
  for (int c = 0; c < env.num_actions(); ++c) {
    if (!mask.occupied(c)) return c;
  }
  return 0;  // everything masked; any action is a no-op
}

}  // namespace

int FixedOrderPolicy::act(const Environment& env) {
  const auto& mask = env.state().mask;
  for (int cell : order_) {
    if (cell >= 0 && cell < env.num_actions() && !mask.occupied(cell)) return cell;
  }
  return lowest_unmasked(env);
}

PlantedOrderPolicy::PlantedOrderPolicy(const PlantedOracleConfig& config) {
  std::vector<SalientCell> cells = config.salient;
  std::stable_sort(cells.begin(), cells.end(), [](const SalientCell& a, const SalientCell& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.cell < b.cell;
  });
  for (const auto& c : cells) order_.push_back(c.cell);
}

int PlantedOrderPolicy::act(const Environment& env) {
  const auto& mask = env.state().mask;
  for (int cell : order_) {
    if (!mask.occupied(cell)) return cell;
  }
  return lowest_unmasked(env);
}

int RandomPolicy::act(const Environment& env) {
  const auto& mask = env.state().mask;
  std::vector<int> free;
  for (int c = 0; c < env.num_actions(); ++c) {
    if (!mask.occupied(c)) free.push_back(c);
  }
  if (free.empty()) return rng_.uniform_int(0, env.num_actions() - 1);
  return free[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<int>(free.size()) - 1))];
}

}  // namespace rexl
