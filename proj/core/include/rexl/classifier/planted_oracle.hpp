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

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/grid.hpp"

namespace rexl {

enum class Combine { kLinear, kMultiplicative };

struct SalientCell {
  int cell = 0;
  double weight = 0.0;
};

// Synthetic classifier with analytically known saliency. The target-class
// score is a function of how intact each salient cell is relative to a
// stored reference image; every other class scores 0.
struct PlantedOracleConfig {
  ImageTensor reference;
  int k = 7;
  std::vector<SalientCell> salient;
  Combine combine = Combine::kLinear;
  double tolerance = 0.25;  // mean absolute deviation at which a cell counts as destroyed
  int target_class = 0;
  int num_classes = 1;

  // Throws ContractError unless weights are >= 0 and sum to one, cells are
  // distinct and inside the grid, and tolerance > 0.
  void validate() const;
};

// max(0, 1 - meanAbsDiff(cell pixels, reference) / tolerance).
double oracle_intactness(const PlantedOracleConfig& config, const ImageTensor& image, int cell);

class PlantedOracle final : public Classifier {
 public:
  explicit PlantedOracle(PlantedOracleConfig config);

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return config_.reference.shape(); }
  int num_classes() const override { return config_.num_classes; }

  // Linear: sum_b w_b I_b. Multiplicative: prod_b I_b.
  double target_score(const ImageTensor& image) const;
  const PlantedOracleConfig& config() const noexcept { return config_; }
  const GridSpec& grid() const noexcept { return grid_; }

 private:
  PlantedOracleConfig config_;
  GridSpec grid_;
};

}  // namespace rexl
