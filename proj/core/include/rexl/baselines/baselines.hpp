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
#include <span>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/image.hpp"
#include "rexl/core/rng.hpp"
#include "rexl/saliency/saliency.hpp"

namespace rexl {

struct RiseConfig {
  int masks = 4000;
  double keep_prob = 0.5;
  int k = 7;
  bool random_shift = true;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

// One smooth mask: a k x k keep grid and the sub-cell shift used when
// upsampling it.
struct RiseMask {
  std::vector<double> grid;
  double shift_x = 0.0;
  double shift_y = 0.0;
};

// Mask i is a pure function of (config.seed, i).
RiseMask sample_rise_mask(const RiseConfig& config, int height, int width, int index);

struct PixelSaliency {
  Field saliency;
  std::uint64_t calls = 0;
};

// saliency(x) = sum_i score_i m_i(x) / (N p), with masked-out pixels pulled
// to the value-range midpoint: m x + (1 - m) mid. Masks are reduced in a fixed
// chunk order, so the thread count never changes the result.
PixelSaliency rise_from_masks(Classifier& classifier, const ImageTensor& image, int target_class,
                              std::span<const RiseMask> masks, double keep_prob, int threads = 1);
PixelSaliency rise_saliency(Classifier& classifier, const ImageTensor& image, int target_class,
                            const RiseConfig& config);

// Mean of the field over each grid cell.
std::vector<double> pool_to_grid(const Field& field, int k);

// One-step lookahead: at each step score every unmasked cell and keep the
// one with the largest drop (ties to the lower index). Masking uses the
// environment's noise for `seed`.
Explanation greedy_saliency(Classifier& classifier, const ImageTensor& image, int target_class, int k,
                            int budget, double lambda, std::uint64_t seed);

// Random permutation of cells mapped to strictly decreasing weights
// K^2, K^2 - 1, ..., 1, normalized.
SaliencyMap random_saliency(int k, Rng& rng);

}  // namespace rexl
