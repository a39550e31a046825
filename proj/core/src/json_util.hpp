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

// Internal helpers shared by the JSON (de)serializers. Not installed.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "rexl/core/error.hpp"
#include "rexl/nn/layers.hpp"

namespace rexl::detail {

using nlohmann::json;

inline json dense_to_json(const nn::Dense& layer) {
  return json{{"rows", layer.rows}, {"cols", layer.cols}, {"w", layer.w}, {"b", layer.b}};
}

inline nn::Dense dense_from_json(const json& j) {
  nn::Dense layer;
  layer.rows = j.at("rows").get<int>();
  layer.cols = j.at("cols").get<int>();
  layer.w = j.at("w").get<std::vector<double>>();
  layer.b = j.at("b").get<std::vector<double>>();
  if (layer.rows < 1 || layer.cols < 1 ||
      layer.w.size() != static_cast<std::size_t>(layer.rows) * static_cast<std::size_t>(layer.cols) ||
      layer.b.size() != static_cast<std::size_t>(layer.rows)) {
    throw FormatError("layer arrays do not match the declared rows/cols");
  }
  return layer;
}

// Parses text, mapping parser and type errors to FormatError.
inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(what + ": " + e.what());
  }
}

inline void check_format(const json& j, std::string_view expected, const std::string& what) {
  if (!j.is_object() || !j.contains("format") || !j.at("format").is_string()) {
    throw FormatError(what + ": missing \"format\" field");
  }
  const auto found = j.at("format").get<std::string>();
  if (found != expected) {
    throw VersionError(what + ": unsupported format \"" + found + "\" (expected \"" +
                       std::string(expected) + "\")");
  }
}

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary file and rename so readers never see partial output.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rexl::detail
