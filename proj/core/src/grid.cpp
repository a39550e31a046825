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

#include "rexl/core/grid.hpp"

#include <algorithm>
#include <string>

#include "rexl/core/error.hpp"
#include "rexl/core/rng.hpp"

namespace rexl {

namespace {

std::vector<int> edges(int k, int extent) {
  std::vector<int> out(static_cast<std::size_t>(k) + 1);
  const int step = extent / k;
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = i * step;
  out[static_cast<std::size_t>(k)] = extent;
  return out;
}

}  // namespace

GridSpec::GridSpec(int k, int height, int width) : k_(k), height_(height), width_(width) {
  require(k >= 1, "GridSpec: k must be >= 1");
  if (height < k || width < k) {
    throw ContractError("GridSpec: image " + std::to_string(height) + "x" +
                        std::to_string(width) + " is smaller than the " + std::to_string(k) +
                        "x" + std::to_string(k) + " grid");
  }
  row_edges_ = edges(k, height);
  col_edges_ = edges(k, width);
}

CellRect GridSpec::cell(int index) const {
  if (index < 0 || index >= cells()) {
    throw ContractError("GridSpec: cell index " + std::to_string(index) + " out of range [0, " +
                        std::to_string(cells()) + ")");
  }
  return cell(index / k_, index % k_);
}

CellRect GridSpec::cell(int row, int col) const {
  require(row >= 0 && row < k_ && col >= 0 && col < k_, "GridSpec: cell row/col out of range");
  const auto r = static_cast<std::size_t>(row);
  const auto c = static_cast<std::size_t>(col);
  return {row_edges_[r], col_edges_[c], row_edges_[r + 1], col_edges_[c + 1]};
}

int GridSpec::cell_at(int y, int x) const {
  require(y >= 0 && y < height_ && x >= 0 && x < width_, "GridSpec: pixel out of range");
  const int step_y = height_ / k_;
  const int step_x = width_ / k_;
  const int row = std::min(y / step_y, k_ - 1);
  const int col = std::min(x / step_x, k_ - 1);
  return row * k_ + col;
}

GridMask::GridMask(GridSpec grid, std::uint64_t noise_seed)
    : grid_(std::move(grid)),
      noise_seed_(noise_seed),
      occupied_(static_cast<std::size_t>(grid_.cells()), 0) {}

bool GridMask::occupied(int cell) const {
  require(cell >= 0 && cell < grid_.cells(), "GridMask: cell index out of range");
  return occupied_[static_cast<std::size_t>(cell)] != 0;
}

void GridMask::set(int cell, bool value) {
  require(cell >= 0 && cell < grid_.cells(), "GridMask: cell index out of range");
  auto& slot = occupied_[static_cast<std::size_t>(cell)];
  if ((slot != 0) != value) count_ += value ? 1 : -1;
  slot = value ? 1 : 0;
}

float mask_noise(std::uint64_t noise_seed, std::size_t flat_index, const ValueRange& range) noexcept {
  const double u = unit_double(mix64(noise_seed, static_cast<std::uint64_t>(flat_index)));
  const auto v = static_cast<float>(range.lo + range.width() * u);
  // float rounding can land exactly on hi; keep it inside the range.
  return v > static_cast<float>(range.hi) ? static_cast<float>(range.hi) : v;
}

void fill_cell_with_noise(ImageTensor& image, const GridSpec& grid, int cell,
                          std::uint64_t noise_seed) {
  require(grid.matches(image), "fill_cell_with_noise: grid does not tile the image");
  const CellRect rect = grid.cell(cell);
  const int channels = image.channels();
  auto data = image.data();
  for (int y = rect.y0; y < rect.y1; ++y) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      const std::size_t base = image.index(y, x, 0);
      for (int c = 0; c < channels; ++c) {
        const std::size_t i = base + static_cast<std::size_t>(c);
        data[i] = mask_noise(noise_seed, i, image.range());
      }
    }
  }
}

void copy_cell(ImageTensor& image, const ImageTensor& source, const GridSpec& grid, int cell) {
  require(image.shape() == source.shape(), "copy_cell: shape mismatch");
  require(grid.matches(image), "copy_cell: grid does not tile the image");
  const CellRect rect = grid.cell(cell);
  const auto row_len = static_cast<std::size_t>(rect.width() * image.channels());
  auto dst = image.data();
  auto src = source.data();
  for (int y = rect.y0; y < rect.y1; ++y) {
    const std::size_t base = image.index(y, rect.x0, 0);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(base), row_len,
                dst.begin() + static_cast<std::ptrdiff_t>(base));
  }
}

ImageTensor apply_mask(const ImageTensor& image, const GridMask& mask) {
  if (!mask.grid().matches(image)) {
    throw ContractError("apply_mask: mask grid " + std::to_string(mask.grid().height()) + "x" +
                        std::to_string(mask.grid().width()) + " does not tile image " +
                        std::to_string(image.height()) + "x" + std::to_string(image.width()));
  }
  ImageTensor out = image;
  for (int cell = 0; cell < mask.grid().cells(); ++cell) {
    if (mask.occupied(cell)) fill_cell_with_noise(out, mask.grid(), cell, mask.noise_seed());
  }
  return out;
}

}  // namespace rexl
