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

#include "rexl/baselines/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "rexl/core/error.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/core/grid.hpp"
#include "rexl/core/parallel.hpp"

namespace rexl {

namespace {

constexpr int kRiseChunk = 64;

double target_score(Classifier& classifier, const ImageTensor& image, int target_class) {
  const auto scores = classifier.score(image);
  return scores.scores[static_cast<std::size_t>(target_class)];
}

void check_target(const Classifier& classifier, const ImageTensor& image, int target_class) {
  require(image.shape() == classifier.input_shape(), "image shape differs from the classifier input");
  require(target_class >= 0 && target_class < classifier.num_classes(), "target class out of range");
}

}  // namespace

void RiseConfig::validate() const {
  if (masks < 1) throw ConfigError("rise: masks must be >= 1");
  if (!(keep_prob > 0.0 && keep_prob < 1.0)) throw ConfigError("rise: keep_prob must be in (0, 1)");
  if (k < 1) throw ConfigError("rise: k must be >= 1");
}

RiseMask sample_rise_mask(const RiseConfig& config, int height, int width, int index) {
  Rng rng(config.seed, static_cast<std::uint64_t>(index));
  RiseMask mask;
  mask.grid.resize(static_cast<std::size_t>(config.k) * static_cast<std::size_t>(config.k));
  for (double& g : mask.grid) g = rng.bernoulli(config.keep_prob) ? 1.0 : 0.0;
  if (config.random_shift) {
    mask.shift_x = rng.uniform() * static_cast<double>(width) / config.k;
    mask.shift_y = rng.uniform() * static_cast<double>(height) / config.k;
  }
  return mask;
}

namespace {

PixelSaliency rise_impl(Classifier& classifier, const ImageTensor& image, int target_class, int count,
                        const std::function<RiseMask(int)>& mask_at, int k, double keep_prob,
                        int threads) {
  check_target(classifier, image, target_class);
  require(count >= 1, "rise: need at least one mask");
  const int h = image.height();
  const int w = image.width();
  const int c = image.channels();
  const auto mid = static_cast<float>(image.range().midpoint());
  const auto chunks = static_cast<std::size_t>((count + kRiseChunk - 1) / kRiseChunk);
  std::vector<Field> partial(chunks);
  const int workers = classifier.thread_safe() ? resolve_threads(threads) : 1;
  parallel_for(chunks, workers, [&](std::size_t chunk) {
    Field acc(h, w, 0.0);
    ImageTensor masked = image;
    const int first = static_cast<int>(chunk) * kRiseChunk;
    const int last = std::min(count, first + kRiseChunk);
    for (int i = first; i < last; ++i) {
      const RiseMask mask = mask_at(i);
      require(mask.grid.size() == static_cast<std::size_t>(k) * static_cast<std::size_t>(k),
              "rise: mask grid must be k*k");
      const Field m = bilinear_upsample(mask.grid, k, h, w, mask.shift_x, mask.shift_y);
      const auto src = image.data();
      auto dst = masked.data();
      for (std::size_t p = 0; p < m.values.size(); ++p) {
        const double mv = m.values[p];
        for (int ch = 0; ch < c; ++ch) {
          const std::size_t idx = p * static_cast<std::size_t>(c) + static_cast<std::size_t>(ch);
          dst[idx] = static_cast<float>(mv * src[idx] + (1.0 - mv) * mid);
        }
      }
      const double s = target_score(classifier, masked, target_class);
      for (std::size_t p = 0; p < m.values.size(); ++p) acc.values[p] += s * m.values[p];
    }
    partial[chunk] = std::move(acc);
  });
  PixelSaliency out;
  out.saliency = Field(h, w, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t p = 0; p < acc.values.size(); ++p) out.saliency.values[p] += acc.values[p];
  }
  const double norm = 1.0 / (static_cast<double>(count) * keep_prob);
  for (double& v : out.saliency.values) v *= norm;
  out.calls = static_cast<std::uint64_t>(count);
  return out;
}

}  // namespace

PixelSaliency rise_from_masks(Classifier& classifier, const ImageTensor& image, int target_class,
                              std::span<const RiseMask> masks, double keep_prob, int threads) {
  require(!masks.empty(), "rise: need at least one mask");
  const auto cells = masks.front().grid.size();
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
  require(static_cast<std::size_t>(k) * static_cast<std::size_t>(k) == cells, "rise: mask grid is not square");
  require(keep_prob > 0.0 && keep_prob < 1.0 + 1e-12, "rise: keep_prob must be in (0, 1]");
  return rise_impl(classifier, image, target_class, static_cast<int>(masks.size()),
                   [&](int i) { return masks[static_cast<std::size_t>(i)]; }, k, keep_prob, threads);
}

PixelSaliency rise_saliency(Classifier& classifier, const ImageTensor& image, int target_class,
                            const RiseConfig& config) {
  config.validate();
  return rise_impl(classifier, image, target_class, config.masks,
                   [&](int i) { return sample_rise_mask(config, image.height(), image.width(), i); },
                   config.k, config.keep_prob, config.threads);
}

std::vector<double> pool_to_grid(const Field& field, int k) {
  const GridSpec grid(k, field.height, field.width);
  std::vector<double> out(static_cast<std::size_t>(grid.cells()), 0.0);
  for (int cell = 0; cell < grid.cells(); ++cell) {
    const CellRect r = grid.cell(cell);
    double sum = 0.0;
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) sum += field.at(y, x);
    }
    out[static_cast<std::size_t>(cell)] = sum / r.area();
  }
  return out;
}

Explanation greedy_saliency(Classifier& classifier, const ImageTensor& image, int target_class, int k,
                            int budget, double lambda, std::uint64_t seed) {
  check_target(classifier, image, target_class);
  const GridSpec grid(k, image.height(), image.width());
  require(budget >= 0 && budget <= grid.cells(), "greedy: budget must be in [0, k*k]");
  Explanation out;
  ImageTensor current = image;
  std::vector<bool> masked(static_cast<std::size_t>(grid.cells()), false);
  double p = target_score(classifier, current, target_class);
  out.calls = 1;
  out.trace.initial_score = p;
  ImageTensor candidate = current;
  ImageTensor best_image;
  for (int t = 0; t < budget; ++t) {
    int best = -1;
    double best_score = 0.0;
    for (int cell = 0; cell < grid.cells(); ++cell) {
      if (masked[static_cast<std::size_t>(cell)]) continue;
      fill_cell_with_noise(candidate, grid, cell, seed);
      const double s = target_score(classifier, candidate, target_class);
      ++out.calls;
      if (best < 0 || s < best_score) {
        best = cell;
        best_score = s;
        best_image = candidate;
      }
      copy_cell(candidate, current, grid, cell);
    }
    masked[static_cast<std::size_t>(best)] = true;
    current = best_image;
    candidate = current;
    out.trace.entries.push_back({best, p - best_score, best_score});
    p = best_score;
  }
  out.map = normalize_map(accumulate_credit(out.trace, k, lambda), k, lambda);
  return out;
}

SaliencyMap random_saliency(int k, Rng& rng) {
  require(k >= 1, "random_saliency: k must be >= 1");
  const int cells = k * k;
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());
  std::vector<double> raw(static_cast<std::size_t>(cells));
  for (int rank = 0; rank < cells; ++rank) {
    raw[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] = cells - rank;
  }
  return normalize_map(raw, k, 1.0);
}

}  // namespace rexl
