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
#include <optional>
#include <string>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/rng.hpp"
#include "rexl/nn/layers.hpp"

namespace rexl {

enum class HeadKind { kSoftmax, kSigmoid };

// 3x3 same-padded convolution with a rectifier, applied to the pooled input.
// Weights are filters x (3 * 3 * channels), ordered (dy, dx, channel).
struct ConvLayer {
  int filters = 0;
  int channels = 0;
  std::vector<double> w;
  std::vector<double> b;

  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

// Small learned base model: average-pool the image to pool x pool, an
// optional convolution, then a dense rectifier network with a softmax or
// per-class sigmoid head.
struct TinyNetParams {
  InputShape input;
  int pool = 14;
  std::optional<ConvLayer> conv;
  nn::Mlp mlp;
  HeadKind head = HeadKind::kSoftmax;

  int num_classes() const noexcept { return mlp.output_width(); }
  int feature_width() const noexcept;
  // Throws ContractError on incompatible shapes or non-finite values.
  void validate() const;
  friend bool operator==(const TinyNetParams&, const TinyNetParams&) = default;
};

class TinyNetClassifier final : public Classifier {
 public:
  explicit TinyNetClassifier(TinyNetParams params);

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return params_.input; }
  int num_classes() const override { return params_.num_classes(); }

  const TinyNetParams& params() const noexcept { return params_; }

 private:
  TinyNetParams params_;
};

struct LabeledDataset {
  std::vector<ImageTensor> images;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const noexcept { return images.size(); }
};

struct TinyTrainConfig {
  std::vector<int> hidden{64};
  int pool = 14;
  bool use_conv = false;
  int conv_filters = 8;
  HeadKind head = HeadKind::kSoftmax;
  int epochs = 60;
  int batch_size = 32;
  double learning_rate = 2e-3;  // Adam
  // Training stops early once this training accuracy is reached.
  double stop_accuracy = 1.0;
  // Below this final training accuracy the run is reported as a failure.
  double required_accuracy = 0.95;
};

struct TinyTrainResult {
  TinyNetParams params;
  double accuracy = 0.0;
  int epochs_run = 0;
};

// Throws ContractError for an empty or inconsistent dataset and
// TrainingError when required_accuracy is not reached.
TinyTrainResult train_tiny_classifier(const LabeledDataset& dataset, const TinyTrainConfig& config, Rng& rng);

double classification_accuracy(Classifier& classifier, const LabeledDataset& dataset);

inline constexpr std::string_view kTinyWeightsFormat = "rexl-weights/1";

std::string tiny_net_to_json(const TinyNetParams& params);
TinyNetParams tiny_net_from_json(const std::string& text);
void save_tiny_net(const std::filesystem::path& path, const TinyNetParams& params);
TinyNetParams load_tiny_net(const std::filesystem::path& path);

}  // namespace rexl
