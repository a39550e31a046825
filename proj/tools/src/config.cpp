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

#include "rexl/cli/config.hpp"

#include <set>

#include "io.hpp"
#include "rexl/core/encoding.hpp"
#include "rexl/core/error.hpp"
#include "rexl/data/synthetic.hpp"

namespace rexl::cli {

namespace {

json common_defaults() {
  return {{"version", kConfigVersion}, {"seed", 0}, {"threads", 0}, {"out", "out"}};
}

json data_defaults() {
  const PlantedFamilySpec family;
  return {{"type", "shapes"},
          {"dir", ""},
          {"limit", 0},
          {"size", family.size},
          {"channels", family.channels},
          {"k", family.k},
          {"weights", family.weights},
          {"combine", "linear"},
          {"tolerance", family.tolerance},
          {"background", {family.background_lo, family.background_hi}},
          {"salient", {family.salient_top, family.salient_bottom}},
          {"texture", family.texture},
          {"candidate_cells", family.candidate_cells},
          {"family_seed", family.seed},
          {"offset", 0},
          {"count", 0}};
}

json classifier_defaults() {
  return {{"type", "tiny"}, {"weights", ""}, {"command", ""}, {"timeout_ms", 30000}, {"workers", 1}};
}

json eval_defaults() {
  return {{"cells_per_step", 1}, {"blur_sigma", 10.0}, {"fill", "noise"}};
}

json rise_defaults() {
  return {{"masks", 4000}, {"keep_prob", 0.5}, {"random_shift", true}};
}

const std::set<std::string>& unhashed_keys() {
  static const std::set<std::string> keys{"out", "threads", "resume", "max_updates"};
  return keys;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"synth-data", "train-classifier", "train", "explain",
                                              "evaluate",   "compare",          "bench"};
  return names;
}

json default_config(std::string_view command) {
  json c = common_defaults();
  if (command == "synth-data") {
    c["dataset"] = {{"classes", 4},  {"images_per_class", 100}, {"size", 112},
                    {"k", 7},        {"jitter", 0.25},          {"noise", 0.05}};
  } else if (command == "train-classifier") {
    c["data"] = data_defaults();
    c["model"] = {{"hidden", {64}},      {"pool", 14},          {"conv", false},
                  {"conv_filters", 8},   {"head", "softmax"},   {"epochs", 60},
                  {"batch_size", 32},    {"learning_rate", 2e-3}, {"stop_accuracy", 1.0},
                  {"required_accuracy", 0.95}};
  } else if (command == "train") {
    c["data"] = data_defaults();
    c["classifier"] = classifier_defaults();
    c["agent"] = {{"scope", "class"}, {"class_id", 0}, {"image", ""},
                  {"k", 7},           {"pool", 28},    {"gamma", 1.0}};
    c["train"] = {{"total_steps", 2000000},   {"steps_per_update", 490}, {"learning_rate", 1e-4},
                  {"entropy_coef", 0.01},     {"value_coef", 1.0},       {"rms_alpha", 0.9},
                  {"rms_epsilon", 1e-5},      {"max_grad_norm", 0.5},    {"importance_clip", 10.0},
                  {"replay_capacity", 0},     {"replay_per_update", 0},  {"hidden", {256, 128}},
                  {"transport_retries", 3},   {"checkpoint_every", 0}};
    c["resume"] = false;
    c["max_updates"] = 0;
  } else if (command == "explain") {
    c["data"] = data_defaults();
    c["classifier"] = classifier_defaults();
    c["agent"] = "";
    c["class"] = -1;
    c["lambda"] = 1.0;
    c["heatmap_alpha"] = 0.5;
  } else if (command == "evaluate") {
    c["data"] = data_defaults();
    c["classifier"] = classifier_defaults();
    c["agent"] = "";
    c["class"] = -1;
    c["lambdas"] = {1.0};
    c["eval"] = eval_defaults();
    c["curves"] = true;
  } else if (command == "compare") {
    c["data"] = data_defaults();
    c["classifier"] = classifier_defaults();
    c["agent"] = "";
    c["class"] = -1;
    c["methods"] = {"rexl", "rise", "greedy", "random"};
    c["lambda"] = 1.0;
    c["rise"] = rise_defaults();
    c["greedy_budget"] = 0;
    c["eval"] = eval_defaults();
  } else if (command == "bench") {
    c["data"] = data_defaults();
    c["classifier"] = classifier_defaults();
    c["agent"] = "";
    c["class"] = -1;
    c["methods"] = {"rexl", "rise", "greedy"};
    c["lambda"] = 1.0;
    c["rise"] = rise_defaults();
    c["greedy_budget"] = 0;
    c["latency_ms"] = 0.0;
    c["repetitions"] = 1;
  } else {
    throw ConfigError("unknown command '" + std::string(command) + "'");
  }
  return c;
}

json load_config_file(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path.string() + ": expected a JSON object");
  if (!j.contains("version")) throw ConfigError("config " + path.string() + ": missing \"version\"");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kConfigVersion) {
    throw ConfigError("config " + path.string() + ": unsupported version " + j["version"].dump());
  }
  return j;
}

namespace {

void merge_objects(json& base, const json& overrides) {
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    auto existing = base.find(it.key());
    if (existing != base.end() && existing->is_object() && it->is_object()) {
      merge_objects(*existing, *it);
    } else {
      base[it.key()] = *it;
    }
  }
}

}  // namespace

void merge_config(json& base, const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("config overrides must be an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  }
  merge_objects(base, overrides);
}

void set_path(json& config, std::string_view dotted, json value) {
  if (dotted.empty()) throw ConfigError("empty config key");
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (key.empty()) throw ConfigError("malformed config key '" + std::string(dotted) + "'");
    if (!node->is_object() || !node->contains(key)) {
      throw ConfigError("unknown config key '" + std::string(dotted) + "'");
    }
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

json parse_value(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return std::string(text);
  }
}

std::string config_hash(const json& config) {
  json copy = config;
  for (const auto& key : unhashed_keys()) copy.erase(key);
  return hash_hex(copy.dump());
}

json artifact_meta(const json& config, std::string_view format) {
  return {{"config_hash", config_hash(config)}, {"seed", config.value("seed", std::uint64_t{0})}, {"format", format}};
}

std::map<std::string, std::string> artifact_text(const json& config, std::string_view format) {
  return {{"config_hash", config_hash(config)},
          {"seed", std::to_string(config.value("seed", std::uint64_t{0}))},
          {"format", std::string(format)}};
}

void write_effective_config(const std::filesystem::path& out_dir, const json& config) {
  write_file(out_dir / "effective_config.json", config.dump(2) + "\n");
}

}  // namespace rexl::cli
