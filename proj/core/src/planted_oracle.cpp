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

#include "rexl/classifier/planted_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rexl/core/error.hpp"

namespace rexl {

void PlantedOracleConfig::validate() const {
  require(!reference.empty(), "PlantedOracleConfig: missing reference image");
  require(tolerance > 0.0, "PlantedOracleConfig: tolerance d0 must be > 0");
  require(num_classes >= 1 && target_class >= 0 && target_class < num_classes,
          "PlantedOracleConfig: target class out of range");
  require(!salient.empty(), "PlantedOracleConfig: at least one salient cell is required");
  const GridSpec grid(k, reference.height(), reference.width());
  std::set<int> seen;
  double total = 0.0;
  for (const auto& s : salient) {
    require(s.cell >= 0 && s.cell < grid.cells(), "PlantedOracleConfig: salient cell outside the grid");
    require(seen.insert(s.cell).second, "PlantedOracleConfig: duplicate salient cell");
    require(s.weight >= 0.0, "PlantedOracleConfig: negative salient weight");
    total += s.weight;
  }
  require(std::abs(total - 1.0) <= 1e-9, "PlantedOracleConfig: salient weights must sum to 1");
}

namespace {

double intactness_on_grid(const PlantedOracleConfig& config, const GridSpec& grid,
                          const ImageTensor& image, int cell) {
  const CellRect rect = grid.cell(cell);
  const int channels = image.channels();
  double deviation = 0.0;
  for (int y = rect.y0; y < rect.y1; ++y) {
    const std::size_t base = image.index(y, rect.x0, 0);
    const std::size_t len = static_cast<std::size_t>(rect.width() * channels);
    const auto a = image.data().subspan(base, len);
    const auto b = config.reference.data().subspan(base, len);
    for (std::size_t i = 0; i < len; ++i) {
      deviation += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
    }
  }
  const double mad = deviation / (static_cast<double>(rect.area()) * channels);
  return std::max(0.0, 1.0 - mad / config.tolerance);
}

}  // namespace

double oracle_intactness(const PlantedOracleConfig& config, const ImageTensor& image, int cell) {
  require(image.shape() == config.reference.shape(), "oracle_intactness: image does not match reference");
  const GridSpec grid(config.k, image.height(), image.width());
  return intactness_on_grid(config, grid, image, cell);
}

PlantedOracle::PlantedOracle(PlantedOracleConfig config)
    : config_(std::move(config)) {
  config_.validate();
  grid_ = GridSpec(config_.k, config_.reference.height(), config_.reference.width());
}

double PlantedOracle::target_score(const ImageTensor& image) const {
  if (config_.combine == Combine::kLinear) {
    double s = 0.0;
    for (const auto& cell : config_.salient) {
      s += cell.weight * intactness_on_grid(config_, grid_, image, cell.cell);
    }
    return std::clamp(s, 0.0, 1.0);
  }
  double s = 1.0;
  for (const auto& cell : config_.salient) s *= intactness_on_grid(config_, grid_, image, cell.cell);
  return s;
}

ClassScores PlantedOracle::score(const ImageTensor& image) {
  check_input(image);
  ClassScores out;
  out.kind = ScoreKind::kMultilabel;
  out.scores.assign(static_cast<std::size_t>(config_.num_classes), 0.0);
  out.scores[static_cast<std::size_t>(config_.target_class)] = target_score(image);
  return out;
}

}  // namespace rexl
