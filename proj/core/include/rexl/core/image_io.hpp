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

#include <filesystem>
#include <map>
#include <string>

#include "rexl/core/image.hpp"

namespace rexl {

using TextMetadata = std::map<std::string, std::string>;

// 8-bit files are mapped linearly onto `range` (0 -> lo, 255 -> hi).
// PNG: gray, gray+alpha, RGB, RGBA and palette inputs are accepted; alpha is
// dropped and 16-bit samples are reduced to 8 bits.
ImageTensor read_png(const std::filesystem::path& path, ValueRange range = {});
// Binary (P5) and ASCII (P2) graymaps with maxval <= 255.
ImageTensor read_pgm(const std::filesystem::path& path, ValueRange range = {});
// Dispatches on the file extension (.png / .pgm).
ImageTensor read_image(const std::filesystem::path& path, ValueRange range = {});

// One- and three-channel images; `text` entries become tEXt chunks.
void write_png(const std::filesystem::path& path, const ImageTensor& image,
               const TextMetadata& text = {});
void write_pgm(const std::filesystem::path& path, const ImageTensor& image);

// Nearest 8-bit level of a value within `range`.
unsigned char quantize(double value, const ValueRange& range) noexcept;

}  // namespace rexl
