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

#include <memory>
#include <string>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/classifier/tiny_net.hpp"
#include "rexl/cli/config.hpp"
#include "rexl/core/image.hpp"
#include "rexl/data/synthetic.hpp"

namespace rexl::cli {

struct Sample {
  std::string id;
  std::shared_ptr<const ImageTensor> image;
  int label = 0;
  std::shared_ptr<Classifier> classifier;
};

struct ShapesDataset {
  std::vector<std::string> files;
  std::vector<int> labels;
  std::vector<std::shared_ptr<const ImageTensor>> images;
  int num_classes = 0;
};

ShapesDataset load_shapes_dataset(const std::filesystem::path& dir);
LabeledDataset to_labeled(const ShapesDataset& data);

bool is_planted(const json& data);
PlantedFamilySpec planted_family(const json& data);

// Builds the classifier named by a classifier spec for a shapes dataset.
std::shared_ptr<Classifier> make_classifier(const json& spec);

// Every image the data spec names, paired with the classifier to query.
// "limit" > 0 keeps the first entries only.
std::vector<Sample> load_samples(const json& data, const json& classifier);

// Path checks done before any work starts. Throws ConfigError.
void check_data_paths(const json& data);
void check_classifier_paths(const json& data, const json& classifier);

// "tiny_0003" from "dir/tiny_0003.png".
std::string sample_stem(const std::string& id);

}  // namespace rexl::cli
