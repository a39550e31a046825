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

#include "rexl/core/filters.hpp"

#include <algorithm>
#include <cmath>

#include "rexl/core/error.hpp"

namespace rexl {

namespace {

// Index into [0, n) of the symmetric periodic extension with period 2n.
int reflect(int i, int n) noexcept {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

// One 1-D pass over a planar buffer. `stride` steps between taps, `lines`
// independent lines of `length` samples each, `line_stride` between lines.
void convolve_lines(const std::vector<double>& kernel, const double* in, double* out, int length,
                    int stride, int lines, int line_stride) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> line(static_cast<std::size_t>(length));
  for (int l = 0; l < lines; ++l) {
    const double* src = in + static_cast<std::ptrdiff_t>(l) * line_stride;
    double* dst = out + static_cast<std::ptrdiff_t>(l) * line_stride;
    for (int i = 0; i < length; ++i) line[static_cast<std::size_t>(i)] = src[static_cast<std::ptrdiff_t>(i) * stride];
    for (int i = 0; i < length; ++i) {
      double acc = 0.0;
      // Interior samples skip the reflect arithmetic.
      if (i - radius >= 0 && i + radius < length) {
        for (int t = -radius; t <= radius; ++t) {
          acc += kernel[static_cast<std::size_t>(t + radius)] * line[static_cast<std::size_t>(i + t)];
        }
      } else {
        for (int t = -radius; t <= radius; ++t) {
          acc += kernel[static_cast<std::size_t>(t + radius)] *
                 line[static_cast<std::size_t>(reflect(i + t, length))];
        }
      }
      dst[static_cast<std::ptrdiff_t>(i) * stride] = acc;
    }
  }
}

void blur_plane(std::vector<double>& plane, int height, int width, const std::vector<double>& kernel) {
  std::vector<double> tmp(plane.size());
  convolve_lines(kernel, plane.data(), tmp.data(), width, 1, height, width);
  convolve_lines(kernel, tmp.data(), plane.data(), height, width, width, 1);
}

}  // namespace

Field bilinear_upsample(std::span<const double> grid, int k, int out_h, int out_w, double shift_x,
                        double shift_y) {
  require(k >= 1, "bilinear_upsample: k must be >= 1");
  require(grid.size() == static_cast<std::size_t>(k) * static_cast<std::size_t>(k),
          "bilinear_upsample: grid must hold k*k values");
  require(out_h >= k && out_w >= k, "bilinear_upsample: output must be at least k x k");
  const double cell_h = static_cast<double>(out_h) / k;
  const double cell_w = static_cast<double>(out_w) / k;
  require(std::abs(shift_x) < cell_w && std::abs(shift_y) < cell_h,
          "bilinear_upsample: shift must be smaller than one cell");

  // Per-column interpolation coordinates are shared by every row.
  std::vector<int> col_lo(static_cast<std::size_t>(out_w));
  std::vector<int> col_hi(static_cast<std::size_t>(out_w));
  std::vector<double> col_t(static_cast<std::size_t>(out_w));
  for (int x = 0; x < out_w; ++x) {
    const double g = std::clamp((x + 0.5 + shift_x) / cell_w - 0.5, 0.0, static_cast<double>(k - 1));
    const int lo = std::min(static_cast<int>(g), k - 1);
    col_lo[static_cast<std::size_t>(x)] = lo;
    col_hi[static_cast<std::size_t>(x)] = std::min(lo + 1, k - 1);
    col_t[static_cast<std::size_t>(x)] = g - lo;
  }

  Field out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const double g = std::clamp((y + 0.5 + shift_y) / cell_h - 0.5, 0.0, static_cast<double>(k - 1));
    const int r0 = std::min(static_cast<int>(g), k - 1);
    const int r1 = std::min(r0 + 1, k - 1);
    const double ty = g - r0;
    const double* row0 = grid.data() + static_cast<std::ptrdiff_t>(r0) * k;
    const double* row1 = grid.data() + static_cast<std::ptrdiff_t>(r1) * k;
    for (int x = 0; x < out_w; ++x) {
      const auto xi = static_cast<std::size_t>(x);
      const double tx = col_t[xi];
      const double top = row0[col_lo[xi]] + tx * (row0[col_hi[xi]] - row0[col_lo[xi]]);
      const double bottom = row1[col_lo[xi]] + tx * (row1[col_hi[xi]] - row1[col_lo[xi]]);
      out.at(y, x) = top + ty * (bottom - top);
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), "gaussian_kernel: sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = w;
    total += w;
  }
  for (double& w : taps) w /= total;
  return taps;
}

ImageTensor gaussian_blur(const ImageTensor& image, double sigma) {
  require(sigma > 0.0, "gaussian_blur: sigma must be > 0");
  const auto kernel = gaussian_kernel(sigma);
  const int h = image.height();
  const int w = image.width();
  const int channels = image.channels();
  ImageTensor out = image;
  std::vector<double> plane(image.pixels());
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        plane[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] =
            image.at(y, x, c);
      }
    }
    blur_plane(plane, h, w, kernel);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(y, x, c) = static_cast<float>(
            plane[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)]);
      }
    }
  }
  out.clamp_to_range();
  return out;
}

Field gaussian_blur(const Field& field, double sigma) {
  require(sigma > 0.0, "gaussian_blur: sigma must be > 0");
  Field out = field;
  blur_plane(out.values, field.height, field.width, gaussian_kernel(sigma));
  return out;
}

}  // namespace rexl

namespace rexl {

std::vector<double> average_pool(const ImageTensor& image, int pool) {
  require(pool >= 1 && pool <= image.height() && pool <= image.width(),
          "average_pool: pool size must be in [1, min(H, W)]");
  const int h = image.height();
  const int w = image.width();
  const int channels = image.channels();
  const auto cells = static_cast<std::size_t>(pool) * static_cast<std::size_t>(pool);
  std::vector<double> sums(cells * static_cast<std::size_t>(channels), 0.0);
  std::vector<int> counts(cells, 0);
  std::vector<int> col_bin(static_cast<std::size_t>(w));
  for (int x = 0; x < w; ++x) col_bin[static_cast<std::size_t>(x)] = static_cast<int>(static_cast<long long>(x) * pool / w);
  const auto data = image.data();
  std::size_t i = 0;
  for (int y = 0; y < h; ++y) {
    const int row = static_cast<int>(static_cast<long long>(y) * pool / h);
    for (int x = 0; x < w; ++x) {
      const auto bin = static_cast<std::size_t>(row * pool + col_bin[static_cast<std::size_t>(x)]);
      ++counts[bin];
      double* dst = sums.data() + bin * static_cast<std::size_t>(channels);
      for (int c = 0; c < channels; ++c) dst[c] += data[i++];
    }
  }
  const double lo = image.range().lo;
  const double inv_width = 1.0 / image.range().width();
  for (std::size_t bin = 0; bin < cells; ++bin) {
    const double inv = 1.0 / counts[bin];
    for (int c = 0; c < channels; ++c) {
      double& v = sums[bin * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
      v = std::clamp((v * inv - lo) * inv_width, 0.0, 1.0);
    }
  }
  return sums;
}

}  // namespace rexl
