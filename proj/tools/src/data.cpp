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

#include "data.hpp"

#include <sstream>

#include "io.hpp"
#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/classifier/subprocess.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/image_io.hpp"

namespace rexl::cli {

namespace {

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::pair<double, double> get_pair(const json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key);
  if (v.size() != 2) throw ConfigError(std::string("config key '") + key + "' needs two numbers");
  return {v[0], v[1]};
}

}  // namespace

ShapesDataset load_shapes_dataset(const std::filesystem::path& dir) {
  const auto labels_path = dir / "labels.csv";
  std::istringstream in(read_file(labels_path));
  ShapesDataset data;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "filename,class") continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw FormatError(labels_path.string() + ": malformed row '" + line + "'");
    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FormatError(labels_path.string() + ": bad class in row '" + line + "'");
    }
    if (label < 0) throw FormatError(labels_path.string() + ": negative class in row '" + line + "'");
    data.files.push_back(line.substr(0, comma));
    data.labels.push_back(label);
    data.num_classes = std::max(data.num_classes, label + 1);
  }
  if (data.files.empty()) throw FormatError(labels_path.string() + ": no images listed");
  for (const auto& f : data.files) data.images.push_back(std::make_shared<const ImageTensor>(read_image(dir / f)));
  return data;
}

LabeledDataset to_labeled(const ShapesDataset& data) {
  LabeledDataset out;
  for (const auto& img : data.images) out.images.push_back(*img);
  out.labels = data.labels;
  out.num_classes = data.num_classes;
  return out;
}

bool is_planted(const json& data) {
  const auto type = get<std::string>(data, "type");
  if (type == "planted") return true;
  if (type == "shapes") return false;
  throw ConfigError("data.type must be 'shapes' or 'planted', got '" + type + "'");
}

PlantedFamilySpec planted_family(const json& data) {
  PlantedFamilySpec spec;
  spec.size = get<int>(data, "size");
  spec.channels = get<int>(data, "channels");
  spec.k = get<int>(data, "k");
  spec.weights = get<std::vector<double>>(data, "weights");
  const auto combine = get<std::string>(data, "combine");
  if (combine == "linear") {
    spec.combine = Combine::kLinear;
  } else if (combine == "multiplicative") {
    spec.combine = Combine::kMultiplicative;
  } else {
    throw ConfigError("data.combine must be 'linear' or 'multiplicative'");
  }
  spec.tolerance = get<double>(data, "tolerance");
  std::tie(spec.background_lo, spec.background_hi) = get_pair(data, "background");
  std::tie(spec.salient_top, spec.salient_bottom) = get_pair(data, "salient");
  spec.texture = get<double>(data, "texture");
  spec.candidate_cells = get<std::vector<int>>(data, "candidate_cells");
  spec.seed = get<std::uint64_t>(data, "family_seed");
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("planted family: ") + e.what());
  }
  return spec;
}

std::shared_ptr<Classifier> make_classifier(const json& spec) {
  const auto type = get<std::string>(spec, "type");
  if (type == "tiny") {
    return std::make_shared<TinyNetClassifier>(load_tiny_net(get<std::string>(spec, "weights")));
  }
  if (type == "subprocess") {
    SubprocessOptions options;
    options.command = split_command_line(get<std::string>(spec, "command"));
    if (options.command.empty()) throw ConfigError("classifier.command is empty");
    options.timeout = std::chrono::milliseconds(get<int>(spec, "timeout_ms"));
    const int workers = get<int>(spec, "workers");
    if (workers < 1) throw ConfigError("classifier.workers must be >= 1");
    if (workers == 1) return std::make_shared<SubprocessClassifier>(options);
    return std::make_shared<SubprocessPool>(options, workers);
  }
  if (type == "planted") throw ConfigError("the planted classifier requires data.type = 'planted'");
  throw ConfigError("classifier.type must be 'tiny', 'subprocess' or 'planted', got '" + type + "'");
}

std::vector<Sample> load_samples(const json& data, const json& classifier) {
  std::vector<Sample> samples;
  const int limit = get<int>(data, "limit");
  if (limit < 0) throw ConfigError("data.limit must be >= 0");
  if (is_planted(data)) {
    const auto family = planted_family(data);
    const auto offset = get<std::uint64_t>(data, "offset");
    const auto count = get<std::uint64_t>(data, "count");
    if (count == 0) throw ConfigError("data.count must be > 0 to enumerate planted images");
    for (std::uint64_t i = 0; i < count; ++i) {
      if (limit > 0 && samples.size() >= static_cast<std::size_t>(limit)) break;
      auto config = planted_instance(family, offset + i);
      Sample s;
      s.id = "planted_" + std::to_string(offset + i);
      s.image = std::make_shared<const ImageTensor>(config.reference);
      s.label = config.target_class;
      s.classifier = std::make_shared<PlantedOracle>(std::move(config));
      samples.push_back(std::move(s));
    }
    return samples;
  }
  const auto dir = std::filesystem::path(get<std::string>(data, "dir"));
  auto set = load_shapes_dataset(dir);
  auto model = make_classifier(classifier);
  for (std::size_t i = 0; i < set.files.size(); ++i) {
    if (limit > 0 && samples.size() >= static_cast<std::size_t>(limit)) break;
    samples.push_back({set.files[i], set.images[i], set.labels[i], model});
  }
  return samples;
}

void check_data_paths(const json& data) {
  if (is_planted(data)) return;
  const auto dir = std::filesystem::path(get<std::string>(data, "dir"));
  if (dir.empty()) throw ConfigError("data.dir is required for shapes data");
  if (!std::filesystem::is_regular_file(dir / "labels.csv")) {
    throw ConfigError("no labels.csv in data directory " + dir.string());
  }
}

void check_classifier_paths(const json& data, const json& classifier) {
  if (is_planted(data)) {
    const auto type = get<std::string>(classifier, "type");
    if (type != "planted" && type != "tiny") {
      throw ConfigError("planted data scores with its own oracles; classifier.type must be 'planted'");
    }
    return;
  }
  const auto type = get<std::string>(classifier, "type");
  if (type == "tiny") {
    const auto weights = std::filesystem::path(get<std::string>(classifier, "weights"));
    if (weights.empty() || !std::filesystem::is_regular_file(weights)) {
      throw ConfigError("classifier weights not found: '" + weights.string() + "'");
    }
  }
}

std::string sample_stem(const std::string& id) { return std::filesystem::path(id).stem().string(); }

}  // namespace rexl::cli
