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

#pragma once

#include <vector>

#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/core/rng.hpp"
#include "rexl/environment/environment.hpp"

namespace rexl {

// Plays a fixed cell order, then the lowest unmasked cells.
class FixedOrderPolicy final : public Policy {
 public:
  explicit FixedOrderPolicy(std::vector<int> order) : order_(std::move(order)) {}
  int act(const Environment& env) override;

 private:
  std::vector<int> order_;
};

// Knows a planted oracle's salient cells: masks them by descending weight
// (ties to the lower index), then the remaining cells in index order. Makes no
// classifier calls of its own.
class PlantedOrderPolicy final : public Policy {
 public:
  explicit PlantedOrderPolicy(const PlantedOracleConfig& config);
  int act(const Environment& env) override;

 private:
  std::vector<int> order_;
};

// Uniform over unmasked cells.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(Rng rng) : rng_(std::move(rng)) {}
  int act(const Environment& env) override;

 private:
  Rng rng_;
};

}  // namespace rexl
