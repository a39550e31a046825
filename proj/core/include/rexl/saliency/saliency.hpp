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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rexl/agent/policy.hpp"
#include "rexl/classifier/classifier.hpp"
#include "rexl/core/image.hpp"
#include "rexl/environment/environment.hpp"
#include "rexl/saliency/trace.hpp"

namespace rexl {

struct SaliencyMap {
  int k = 0;
  double lambda = 1.0;
  std::vector<double> weights;  // k*k, row-major
  bool normalized = true;
  bool degenerate = false;  // no positive mass; weights are uniform

  int argmax() const noexcept;
  void validate() const;
  friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;
};

// weight(b_t) += sum_{i >= t} lambda^(i-t) delta_i, via S_t = delta_t + lambda S_{t+1}.
// Raw weights may be negative; repeated cells accumulate.
std::vector<double> accumulate_credit(const DeletionTrace& trace, int k, double lambda);

// Clamps negatives, divides by the sum. A zero sum gives the uniform map with
// the degenerate flag set.
SaliencyMap normalize_map(std::span<const double> raw, int k, double lambda = 1.0);

// Cells ordered by descending weight, ties to the lower index.
std::vector<int> ranked_cells(std::span<const double> weights);

// Bilinear upsample to height x width, then Gaussian smoothing. With no sigma
// the smoothing width is one cell; sigma = 0 disables it.
Field render_heatmap(const SaliencyMap& map, int height, int width,
                     std::optional<double> sigma = std::nullopt);

// Blue (low) to red (high) colour ramp over the field's own min/max.
ImageTensor colorize(const Field& heat);
// Heatmap colours blended over the image (converted to RGB in [0, 1]).
ImageTensor overlay(const ImageTensor& image, const Field& heat, double alpha = 0.5);

struct Explanation {
  SaliencyMap map;
  DeletionTrace trace;
  std::uint64_t calls = 0;
};

// One rollout of `policy`, credit accumulation and normalization.
Explanation explain_with_policy(Policy& policy, Classifier& classifier, const EnvConfig& env_config,
                                const ImageTensor& image, int target_class, double lambda,
                                std::uint64_t seed);

// Greedy (argmax) rollout of a trained agent; k*k + 1 classifier calls.
Explanation explain(const PolicyParams& params, Classifier& classifier, const ImageTensor& image,
                    int target_class, double lambda, std::uint64_t seed);

inline constexpr std::string_view kSaliencyFormat = "rexl-saliency/1";

std::string saliency_to_json(const SaliencyMap& map);
SaliencyMap saliency_from_json(const std::string& text);
// Pixel-resolution maps (RISE) carry "resolution":"pixel".
std::string pixel_saliency_to_json(const Field& field, std::string_view method);

}  // namespace rexl
