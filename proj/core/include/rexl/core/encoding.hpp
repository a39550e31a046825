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
#include <string>
#include <string_view>
#include <vector>

namespace rexl {

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws FormatError on characters outside the standard alphabet or bad
// padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Little-endian IEEE-754 binary32 packing used by the subprocess protocol.
std::string encode_floats_base64(std::span<const float> values);
std::vector<float> decode_floats_base64(std::string_view text);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hash_hex(std::string_view text);

}  // namespace rexl
