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
#include <memory>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/grid.hpp"
#include "rexl/core/image.hpp"
#include "rexl/saliency/trace.hpp"

namespace rexl {

using Observation = std::vector<double>;

// Maps a (partially masked) image to a fixed-length feature vector.
class ObservationEncoder {
 public:
  virtual ~ObservationEncoder() = default;
  virtual Observation encode(const ImageTensor& image) const = 0;
  virtual int width(const InputShape& shape) const = 0;
};

// Average pool to pool x pool x C, scaled to [0, 1].
class PooledEncoder final : public ObservationEncoder {
 public:
  explicit PooledEncoder(int pool = 28);
  Observation encode(const ImageTensor& image) const override;
  int width(const InputShape& shape) const override { return pool_ * pool_ * shape.channels; }
  int pool() const noexcept { return pool_; }

 private:
  int pool_;
};

struct EnvConfig {
  int k = 7;
  int pool = 28;
  // Appends a one-hot encoding of the target class to every observation
  // (dataset-wide agents).
  bool one_hot_class = false;
};

struct EnvState {
  std::shared_ptr<const ImageTensor> original;
  ImageTensor current;  // original with the occupied cells replaced by noise
  GridMask mask;
  int t = 0;
  int target_class = 0;
  std::vector<double> scores;  // p(0) .. p(t)
  std::uint64_t seed = 0;      // episode noise seed
};

struct StepOutcome {
  int action = 0;
  double reward = 0.0;  // -p(t)
  double delta = 0.0;   // p(t-1) - p(t)
  bool done = false;
};

// Sequential masking MDP over a k x k grid. State: the masked image. Action:
// a cell to mask. Reward: the negated target-class score after masking.
// Fixed horizon of k*k steps; one classifier call per reset and per step.
class Environment {
 public:
  Environment(Classifier& classifier, EnvConfig config,
              std::shared_ptr<const ObservationEncoder> encoder = nullptr);

  const EnvState& reset(std::shared_ptr<const ImageTensor> image, int target_class, std::uint64_t seed);
  const EnvState& reset(const ImageTensor& image, int target_class, std::uint64_t seed);
  StepOutcome step(int action);
  Observation observe() const;

  const EnvState& state() const noexcept { return state_; }
  bool started() const noexcept { return started_; }
  bool done() const noexcept { return started_ && state_.t == horizon(); }
  const EnvConfig& config() const noexcept { return config_; }
  int num_actions() const noexcept { return config_.k * config_.k; }
  int horizon() const noexcept { return config_.k * config_.k; }
  int observation_width() const;
  std::uint64_t classifier_calls() const noexcept { return calls_; }
  Classifier& classifier() noexcept { return classifier_; }

 private:
  double score_target(const ImageTensor& image);

  Classifier& classifier_;
  EnvConfig config_;
  std::shared_ptr<const ObservationEncoder> encoder_;
  EnvState state_;
  GridSpec grid_;
  bool started_ = false;
  std::uint64_t calls_ = 0;
};

// Chooses the next cell given the environment.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int act(const Environment& env) = 0;
};

// Resets the environment and plays exactly k*k steps with `policy`.
DeletionTrace run_episode(Environment& env, Policy& policy, std::shared_ptr<const ImageTensor> image,
                          int target_class, std::uint64_t seed);

}  // namespace rexl
