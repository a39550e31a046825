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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rexl::cli {

using nlohmann::json;

inline constexpr int kConfigVersion = 1;

// Commands understood by the tool, in help order.
const std::vector<std::string>& command_names();

// Complete default configuration for a command. Throws ConfigError for an
// unknown command.
json default_config(std::string_view command);

// Reads a config file and checks its "version". Throws ConfigError.
json load_config_file(const std::filesystem::path& path);

// Recursively merges `overrides` into `base`. Objects merge key by key; any
// other value replaces the old one. Top-level keys unknown to `base` are
// rejected with ConfigError.
void merge_config(json& base, const json& overrides);

// Sets a dotted path such as "train.learning_rate", creating objects on the
// way.
void set_path(json& config, std::string_view dotted, json value);

// JSON literal if `text` parses as one, otherwise the string itself.
json parse_value(std::string_view text);

// FNV-1a over the canonical dump, ignoring keys that do not affect numeric
// outputs (out, threads, resume, max_updates).
std::string config_hash(const json& config);

// {"config_hash", "seed", "format"} block embedded in every artifact.
json artifact_meta(const json& config, std::string_view format);

// Same fields as strings, for PNG text chunks and CSV headers.
std::map<std::string, std::string> artifact_text(const json& config, std::string_view format);

// Writes `config` as effective_config.json inside `out_dir`.
void write_effective_config(const std::filesystem::path& out_dir, const json& config);

}  // namespace rexl::cli
