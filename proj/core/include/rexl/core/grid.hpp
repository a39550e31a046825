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
#include <vector>

#include "rexl/core/image.hpp"

namespace rexl {

// Half-open pixel rectangle [y0, y1) x [x0, x1).
struct CellRect {
  int y0 = 0;
  int x0 = 0;
  int y1 = 0;
  int x1 = 0;

  int height() const noexcept { return y1 - y0; }
  int width() const noexcept { return x1 - x0; }
  int area() const noexcept { return height() * width(); }
  bool contains(int y, int x) const noexcept { return y >= y0 && y < y1 && x >= x0 && x < x1; }
  friend bool operator==(const CellRect&, const CellRect&) = default;
};

// K x K tiling of an H x W image. Every cell is floor(H/K) x floor(W/K)
// except the last row and column, which absorb the remainder.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(int k, int height, int width);

  int k() const noexcept { return k_; }
  int cells() const noexcept { return k_ * k_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  CellRect cell(int index) const;
  CellRect cell(int row, int col) const;
  int cell_at(int y, int x) const;

  bool matches(const ImageTensor& image) const noexcept {
    return image.height() == height_ && image.width() == width_;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int k_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<int> row_edges_;  // k+1 entries
  std::vector<int> col_edges_;
};

// Which cells are masked plus the seed that fixes the noise used to fill them.
class GridMask {
 public:
  GridMask() = default;
  GridMask(GridSpec grid, std::uint64_t noise_seed);

  const GridSpec& grid() const noexcept { return grid_; }
  std::uint64_t noise_seed() const noexcept { return noise_seed_; }

  bool occupied(int cell) const;
  void set(int cell, bool value = true);
  int count() const noexcept { return count_; }
  const std::vector<std::uint8_t>& cells() const noexcept { return occupied_; }

  friend bool operator==(const GridMask&, const GridMask&) = default;

 private:
  GridSpec grid_;
  std::uint64_t noise_seed_ = 0;
  std::vector<std::uint8_t> occupied_;
  int count_ = 0;
};

// Noise value of one pixel channel. A pure function of (seed, flat index), so
// the fill of a cell never depends on which other cells are masked or on the
// order in which they were masked.
float mask_noise(std::uint64_t noise_seed, std::size_t flat_index, const ValueRange& range) noexcept;

// Overwrites one cell with its episode noise.
void fill_cell_with_noise(ImageTensor& image, const GridSpec& grid, int cell,
                          std::uint64_t noise_seed);

// Overwrites one cell with the pixels of `source`.
void copy_cell(ImageTensor& image, const ImageTensor& source, const GridSpec& grid, int cell);

// Occupied cells replaced by uniform noise drawn independently per pixel and
// channel from image.range(); everything else bit-identical to the input.
ImageTensor apply_mask(const ImageTensor& image, const GridMask& mask);

}  // namespace rexl
