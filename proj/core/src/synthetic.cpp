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

#include "rexl/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rexl/core/error.hpp"
#include "rexl/core/grid.hpp"

namespace rexl {

void SyntheticDatasetSpec::validate() const {
  if (classes < 1 || classes > 4) throw ConfigError("synthetic data supports 1 to 4 classes");
  if (images_per_class < 1) throw ConfigError("images_per_class must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (size < k || size % k != 0) throw ConfigError("image size must be a positive multiple of k");
  if (size < 32) throw ConfigError("image size must be at least 32");
  if (jitter < 0.0 || jitter > 0.4) throw ConfigError("jitter must be in [0, 0.4]");
  if (noise < 0.0 || noise > 0.5) throw ConfigError("noise must be in [0, 0.5]");
}

namespace {

// Coverage of pixel (x, y) by the shape centred at the origin, in [0, 1].
double shape_coverage(int label, double x, double y, double r) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  switch (label) {
    case 0:  // filled square
      return (ax <= r && ay <= r) ? 1.0 : 0.0;
    case 1: {  // plus sign
      const double arm = 0.3 * r;
      return ((ax <= r && ay <= arm) || (ay <= r && ax <= arm)) ? 1.0 : 0.0;
    }
    case 2:  // horizontal bar
      return (ax <= 1.4 * r && ay <= 0.3 * r) ? 1.0 : 0.0;
    default: {  // soft disc
      const double d2 = (x * x + y * y) / (r * r);
      return d2 <= 1.0 ? std::exp(-1.5 * d2) : 0.0;
    }
  }
}

}  // namespace

SyntheticImage render_shape_image(const SyntheticDatasetSpec& spec, int label, int index) {
  require(label >= 0 && label < spec.classes, "shape label out of range");
  Rng rng(mix64(spec.seed, static_cast<std::uint64_t>(label)), static_cast<std::uint64_t>(index));
  const int n = spec.size;
  const double cell = static_cast<double>(n) / spec.k;
  const double r = cell * rng.uniform(1.0, 1.3);
  const double cx = n / 2.0 + spec.jitter * n * rng.uniform(-1.0, 1.0);
  const double cy = n / 2.0 + spec.jitter * n * rng.uniform(-1.0, 1.0);
  float tint[3];
  for (float& t : tint) t = static_cast<float>(rng.uniform(0.75, 1.0));
  const double floor = rng.uniform(0.0, 0.15);

  ImageTensor image(n, n, 3, ValueRange{0.0, 1.0});
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double cover = shape_coverage(label, x + 0.5 - cx, y + 0.5 - cy, r);
      for (int c = 0; c < 3; ++c) {
        const double bg = floor + spec.noise * rng.uniform();
        const double v = bg + cover * (tint[c] - bg);
        image.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%04d.png", std::string(kShapeNames[label]).c_str(), index);
  return {std::move(image), label, name};
}

std::vector<SyntheticImage> generate_shapes(const SyntheticDatasetSpec& spec) {
  spec.validate();
  std::vector<SyntheticImage> out;
  out.reserve(static_cast<std::size_t>(spec.classes * spec.images_per_class));
  for (int label = 0; label < spec.classes; ++label) {
    for (int i = 0; i < spec.images_per_class; ++i) out.push_back(render_shape_image(spec, label, i));
  }
  return out;
}

LabeledDataset to_dataset(const std::vector<SyntheticImage>& images, int classes) {
  LabeledDataset data;
  data.num_classes = classes;
  for (const auto& item : images) {
    data.images.push_back(item.image);
    data.labels.push_back(item.label);
  }
  return data;
}

void PlantedFamilySpec::validate() const {
  if (k < 1 || size < k) throw ConfigError("planted family: size must be >= k >= 1");
  if (channels != 1 && channels != 3) throw ConfigError("planted family: channels must be 1 or 3");
  if (weights.empty() || weights.size() > static_cast<std::size_t>(k * k)) {
    throw ConfigError("planted family: need between 1 and k*k weights");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("planted family: weights must sum to 1");
  if (!(tolerance > 0.0)) throw ConfigError("planted family: tolerance must be positive");
  if (!candidate_cells.empty()) {
    std::vector<int> sorted = candidate_cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
        sorted.back() >= k * k) {
      throw ConfigError("planted family: candidate cells must be distinct and inside the grid");
    }
    if (candidate_cells.size() < weights.size()) {
      throw ConfigError("planted family: fewer candidate cells than salient cells");
    }
  }
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(background_lo) || !in_unit(background_hi) || background_lo > background_hi ||
      !in_unit(salient_top) || !in_unit(salient_bottom) || texture < 0.0) {
    throw ConfigError("planted family: levels must lie in [0, 1] with background_lo <= background_hi");
  }
}

PlantedOracleConfig planted_instance(const PlantedFamilySpec& spec, std::uint64_t index) {
  spec.validate();
  Rng rng(spec.seed, index);
  const GridSpec grid(spec.k, spec.size, spec.size);
  std::vector<int> cells = spec.candidate_cells;
  if (cells.empty()) {
    cells.resize(static_cast<std::size_t>(grid.cells()));
    std::iota(cells.begin(), cells.end(), 0);
  }
  rng.shuffle(cells.begin(), cells.end());

  // Level by weight rank.
  const auto m = spec.weights.size();
  std::vector<std::size_t> by_weight(m);
  std::iota(by_weight.begin(), by_weight.end(), std::size_t{0});
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](std::size_t a, std::size_t b) { return spec.weights[a] > spec.weights[b]; });
  std::vector<double> level(m);
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double t = m == 1 ? 0.0 : static_cast<double>(rank) / static_cast<double>(m - 1);
    level[by_weight[rank]] = spec.salient_top + t * (spec.salient_bottom - spec.salient_top);
  }

  ImageTensor image(spec.size, spec.size, spec.channels, ValueRange{0.0, 1.0});
  auto data = image.data();
  for (auto& v : data) v = static_cast<float>(rng.uniform(spec.background_lo, spec.background_hi));
  PlantedOracleConfig config;
  config.k = spec.k;
  config.combine = spec.combine;
  config.tolerance = spec.tolerance;
  for (std::size_t i = 0; i < m; ++i) {
    const int cell = cells[i];
    config.salient.push_back({cell, spec.weights[i]});
    const CellRect r = grid.cell(cell);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        for (int c = 0; c < spec.channels; ++c) {
          const double v = level[i] + spec.texture * rng.uniform(-1.0, 1.0);
          image.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
    }
  }
  config.reference = std::move(image);
  return config;
}

PlantedFamilySource::PlantedFamilySource(PlantedFamilySpec spec, std::uint64_t members)
    : spec_(std::move(spec)), members_(members) {
  spec_.validate();
}

EpisodeSpec PlantedFamilySource::episode(std::uint64_t index) {
  const std::uint64_t member = members_ == 0 ? index : mix64(spec_.seed, index) % members_;
  auto oracle = std::make_shared<PlantedOracle>(planted_instance(spec_, member));
  auto image = std::make_shared<const ImageTensor>(oracle->config().reference);
  return {std::move(image), 0, std::move(oracle), "planted_" + std::to_string(member)};
}

}  // namespace rexl
