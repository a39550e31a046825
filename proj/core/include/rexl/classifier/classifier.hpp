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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <vector>

#include "rexl/core/image.hpp"

namespace rexl {

enum class ScoreKind { kSoftmax, kMultilabel };

// Per-class scores in [0, 1]; softmax scores additionally sum to one.
struct ClassScores {
  std::vector<double> scores;
  ScoreKind kind = ScoreKind::kMultilabel;

  int size() const noexcept { return static_cast<int>(scores.size()); }
  double operator[](int c) const { return scores.at(static_cast<std::size_t>(c)); }
  // Throws ContractError if an invariant does not hold.
  void validate() const;
};

// The black-box boundary. Explainers only ever call score().
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassScores score(const ImageTensor& image) = 0;
  virtual InputShape input_shape() const = 0;
  virtual int num_classes() const = 0;
  // True when score() may be called concurrently from several threads.
  virtual bool thread_safe() const { return true; }

 protected:
  // Throws ContractError when the image does not match input_shape().
  void check_input(const ImageTensor& image) const;
};

// Counts score() calls and optionally pads each call to a minimum latency
// (busy-wait) for timing experiments. Does not own the wrapped classifier.
class InstrumentedClassifier final : public Classifier {
 public:
  explicit InstrumentedClassifier(Classifier& inner,
                                  std::chrono::nanoseconds min_latency = std::chrono::nanoseconds::zero())
      : inner_(inner), min_latency_(min_latency) {}

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return inner_.input_shape(); }
  int num_classes() const override { return inner_.num_classes(); }
  bool thread_safe() const override { return inner_.thread_safe(); }

  std::uint64_t calls() const noexcept { return calls_.load(); }
  void reset_calls() noexcept { calls_.store(0); }

 private:
  Classifier& inner_;
  std::chrono::nanoseconds min_latency_;
  std::atomic<std::uint64_t> calls_{0};
};

// Returns the same scores for every image. Useful as a null model.
class ConstantClassifier final : public Classifier {
 public:
  ConstantClassifier(InputShape shape, ClassScores scores);

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return shape_; }
  int num_classes() const override { return scores_.size(); }

 private:
  InputShape shape_;
  ClassScores scores_;
};

}  // namespace rexl
