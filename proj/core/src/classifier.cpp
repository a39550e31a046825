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

#include "rexl/classifier/classifier.hpp"

#include <cmath>
#include <string>

#include "rexl/core/error.hpp"

namespace rexl {

void ClassScores::validate() const {
  require(!scores.empty(), "ClassScores: empty score vector");
  double total = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    const double s = scores[c];
    if (!(std::isfinite(s) && s >= 0.0 && s <= 1.0)) {
      throw ContractError("ClassScores: score " + std::to_string(s) + " of class " +
                          std::to_string(c) + " is outside [0, 1]");
    }
    total += s;
  }
  if (kind == ScoreKind::kSoftmax && std::abs(total - 1.0) > 1e-6) {
    throw ContractError("ClassScores: softmax scores sum to " + std::to_string(total));
  }
}

void Classifier::check_input(const ImageTensor& image) const {
  const InputShape expected = input_shape();
  if (image.shape() != expected) {
    throw ContractError("classifier expects " + std::to_string(expected.height) + "x" +
                        std::to_string(expected.width) + "x" + std::to_string(expected.channels) +
                        " input, got " + std::to_string(image.height()) + "x" +
                        std::to_string(image.width()) + "x" + std::to_string(image.channels()));
  }
}

ClassScores InstrumentedClassifier::score(const ImageTensor& image) {
  const auto start = std::chrono::steady_clock::now();
  calls_.fetch_add(1);
  ClassScores out = inner_.score(image);
  if (min_latency_ > std::chrono::nanoseconds::zero()) {
    while (std::chrono::steady_clock::now() - start < min_latency_) {
    }
  }
  return out;
}

ConstantClassifier::ConstantClassifier(InputShape shape, ClassScores scores)
    : shape_(shape), scores_(std::move(scores)) {
  scores_.validate();
}

ClassScores ConstantClassifier::score(const ImageTensor& image) {
  check_input(image);
  return scores_;
}

}  // namespace rexl
