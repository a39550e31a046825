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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rexl/agent/trainer.hpp"
#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/classifier/tiny_net.hpp"
#include "rexl/core/image.hpp"
#include "rexl/core/rng.hpp"

namespace rexl {

// Shape classes, in label order.
inline constexpr std::string_view kShapeNames[] = {"square", "cross", "stripe", "blob"};

struct SyntheticDatasetSpec {
  int classes = 4;
  int images_per_class = 100;
  int size = 112;
  int k = 7;
  double jitter = 0.25;  // max centre offset as a fraction of the image size
  double noise = 0.05;   // background noise amplitude
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

struct SyntheticImage {
  ImageTensor image;
  int label = 0;
  std::string name;  // e.g. "cross_0007.png"
};

// RGB images in [0, 1]: one bright shape a couple of cells across on a dark
// noisy background. Image i of class c depends only on (seed, c, i).
SyntheticImage render_shape_image(const SyntheticDatasetSpec& spec, int label, int index);
std::vector<SyntheticImage> generate_shapes(const SyntheticDatasetSpec& spec);
LabeledDataset to_dataset(const std::vector<SyntheticImage>& images, int classes);

// Planted-oracle configurations with random salient cells. Salient cells are
// drawn at a level that moves from salient_top (largest weight) to
// salient_bottom (smallest), so their location and rank are visible in the
// image itself. The default background is dark, so salient cells stand out
// bright and a noised cell (mean 0.5) differs from both.
struct PlantedFamilySpec {
  int size = 112;
  int channels = 1;
  int k = 7;
  std::vector<double> weights{0.5, 0.3, 0.2};
  Combine combine = Combine::kLinear;
  double tolerance = 0.25;
  double background_lo = 0.0;
  double background_hi = 0.2;
  double salient_top = 1.0;
  double salient_bottom = 0.7;
  double texture = 0.03;  // +- uniform jitter on salient pixels
  // Cells salient cells are drawn from; empty means the whole grid.
  std::vector<int> candidate_cells;
  std::uint64_t seed = 0;

  void validate() const;
};

// Member `index` of the family; its reference image is the image itself.
PlantedOracleConfig planted_instance(const PlantedFamilySpec& spec, std::uint64_t index);

// Training episodes over a planted family: episode i uses member
// mix64(seed, i) mod `members` (every member when members == 0), scored by
// that member's own oracle.
class PlantedFamilySource final : public EpisodeSource {
 public:
  PlantedFamilySource(PlantedFamilySpec spec, std::uint64_t members = 0);
  EpisodeSpec episode(std::uint64_t index) override;

 private:
  PlantedFamilySpec spec_;
  std::uint64_t members_;
};

}  // namespace rexl
