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

#include <span>
#include <vector>

#include "rexl/core/image.hpp"

namespace rexl {

// Bilinear interpolation of a k x k grid (row-major) sampled at the centers of
// an out_h x out_w pixel lattice, displaced by (shift_x, shift_y) pixels.
// Samples beyond the outermost cell centers are clamped, so every output
// value lies within [min, max] of the grid.
//
// Requires out_h, out_w >= k and |shift| smaller than one cell.
Field bilinear_upsample(std::span<const double> grid, int k, int out_h, int out_w,
                        double shift_x = 0.0, double shift_y = 0.0);

// Normalized 1-D Gaussian taps for offsets -r..r, r = ceil(4 sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur with half-sample symmetric padding
// (... c b a | a b c ... x y z | z y x ...). This padding makes every pixel's
// total outgoing weight exactly one, so channel means are preserved.
ImageTensor gaussian_blur(const ImageTensor& image, double sigma);
Field gaussian_blur(const Field& field, double sigma);

}  // namespace rexl

namespace rexl {

// Average-pools an image onto a pool x pool x C lattice (pixel y falls in bin
// y * pool / H) and rescales values from image.range() to [0, 1]. Output is
// row-major with interleaved channels.
std::vector<double> average_pool(const ImageTensor& image, int pool);

}  // namespace rexl
