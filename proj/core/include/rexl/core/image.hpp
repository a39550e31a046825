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

#include <cstddef>
#include <span>
#include <vector>

namespace rexl {

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

struct InputShape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
           static_cast<std::size_t>(channels);
  }
  friend bool operator==(const InputShape&, const InputShape&) = default;
};

// H x W x C image, row-major with interleaved channels. Values are stored as
// 32-bit floats because that is also the subprocess wire format.
class ImageTensor {
 public:
  ImageTensor() = default;
  // Filled with range.lo.
  ImageTensor(int height, int width, int channels, ValueRange range = {});
  // Throws ContractError if the data length or any value violates the shape
  // or range.
  ImageTensor(int height, int width, int channels, std::vector<float> data,
              ValueRange range = {});

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  InputShape shape() const noexcept { return {height_, width_, channels_}; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t pixels() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  const ValueRange& range() const noexcept { return range_; }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }
  float at(int y, int x, int c) const noexcept { return data_[index(y, x, c)]; }
  float& at(int y, int x, int c) noexcept { return data_[index(y, x, c)]; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  // Clamps every value into range(); used after arithmetic that may round
  // past an endpoint.
  void clamp_to_range() noexcept;
  // Throws ContractError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  ValueRange range_{};
  std::vector<float> data_;
};

// Single-channel real field, used for heatmaps and pixel-resolution saliency.
struct Field {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Field() = default;
  Field(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

  double at(int y, int x) const noexcept {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  double& at(int y, int x) noexcept {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

}  // namespace rexl
