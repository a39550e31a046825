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

#include "rexl/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rexl/core/error.hpp"

namespace rexl {

namespace {

void check_shape(int height, int width, int channels, const ValueRange& range) {
  require(height >= 1 && width >= 1 && channels >= 1,
          "ImageTensor: height, width and channels must be >= 1");
  require(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo < range.hi,
          "ImageTensor: value range must satisfy lo < hi");
}

}  // namespace

ImageTensor::ImageTensor(int height, int width, int channels, ValueRange range)
    : height_(height), width_(width), channels_(channels), range_(range) {
  check_shape(height, width, channels, range);
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                   static_cast<std::size_t>(channels),
               static_cast<float>(range.lo));
}

ImageTensor::ImageTensor(int height, int width, int channels, std::vector<float> data,
                         ValueRange range)
    : height_(height), width_(width), channels_(channels), range_(range), data_(std::move(data)) {
  check_shape(height, width, channels, range);
  validate();
}

void ImageTensor::clamp_to_range() noexcept {
  const auto lo = static_cast<float>(range_.lo);
  const auto hi = static_cast<float>(range_.hi);
  for (float& v : data_) v = std::clamp(v, lo, hi);
}

void ImageTensor::validate() const {
  const std::size_t expected = static_cast<std::size_t>(height_) *
                               static_cast<std::size_t>(width_) *
                               static_cast<std::size_t>(channels_);
  if (data_.size() != expected) {
    throw ContractError("ImageTensor: data length " + std::to_string(data_.size()) +
                        " != H*W*C = " + std::to_string(expected));
  }
  const auto lo = static_cast<float>(range_.lo);
  const auto hi = static_cast<float>(range_.hi);
  for (float v : data_) {
    if (!(v >= lo && v <= hi)) {
      throw ContractError("ImageTensor: value " + std::to_string(v) + " outside [" +
                          std::to_string(range_.lo) + ", " + std::to_string(range_.hi) + "]");
    }
  }
}

}  // namespace rexl
