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

#include "rexl/environment/environment.hpp"

#include <string>

#include "rexl/core/error.hpp"
#include "rexl/core/filters.hpp"

namespace rexl {

PooledEncoder::PooledEncoder(int pool) : pool_(pool) {
  require(pool >= 1, "PooledEncoder: pool must be >= 1");
}

Observation PooledEncoder::encode(const ImageTensor& image) const { return average_pool(image, pool_); }

Environment::Environment(Classifier& classifier, EnvConfig config,
                         std::shared_ptr<const ObservationEncoder> encoder)
    : classifier_(classifier), config_(config), encoder_(std::move(encoder)) {
  require(config_.k >= 1, "Environment: k must be >= 1");
  if (!encoder_) encoder_ = std::make_shared<PooledEncoder>(config_.pool);
}

int Environment::observation_width() const {
  const int base = encoder_->width(classifier_.input_shape());
  return base + (config_.one_hot_class ? classifier_.num_classes() : 0);
}

double Environment::score_target(const ImageTensor& image) {
  ++calls_;
  const ClassScores scores = classifier_.score(image);
  if (state_.target_class >= scores.size()) {
    throw ContractError("Environment: classifier returned " + std::to_string(scores.size()) +
                        " scores, target class is " + std::to_string(state_.target_class));
  }
  return scores[state_.target_class];
}

const EnvState& Environment::reset(std::shared_ptr<const ImageTensor> image, int target_class, std::uint64_t seed) {
  require(image != nullptr, "Environment::reset: null image");
  require(image->shape() == classifier_.input_shape(), "Environment::reset: image does not match classifier input");
  require(target_class >= 0 && target_class < classifier_.num_classes(),
          "Environment::reset: class " + std::to_string(target_class) + " out of range");
  if (grid_.k() != config_.k || !grid_.matches(*image)) grid_ = GridSpec(config_.k, image->height(), image->width());
  started_ = false;
  state_.original = std::move(image);
  state_.current = *state_.original;
  state_.mask = GridMask(grid_, seed);
  state_.t = 0;
  state_.target_class = target_class;
  state_.seed = seed;
  state_.scores.clear();
  state_.scores.push_back(score_target(state_.current));
  started_ = true;
  return state_;
}

const EnvState& Environment::reset(const ImageTensor& image, int target_class, std::uint64_t seed) {
  return reset(std::make_shared<const ImageTensor>(image), target_class, seed);
}

StepOutcome Environment::step(int action) {
  require(started_, "Environment::step: reset() has not been called");
  require(!done(), "Environment::step: episode is finished");
  if (action < 0 || action >= num_actions()) {
    throw ContractError("Environment::step: action " + std::to_string(action) + " out of range [0, " +
                        std::to_string(num_actions()) + ")");
  }
  if (!state_.mask.occupied(action)) {
    state_.mask.set(action);
    fill_cell_with_noise(state_.current, grid_, action, state_.seed);
  }
  const double previous = state_.scores.back();
  const double p = score_target(state_.current);
  state_.scores.push_back(p);
  ++state_.t;
  return {action, -p, previous - p, done()};
}

Observation Environment::observe() const {
  require(started_, "Environment::observe: reset() has not been called");
  Observation obs = encoder_->encode(state_.current);
  if (config_.one_hot_class) {
    const std::size_t base = obs.size();
    obs.resize(base + static_cast<std::size_t>(classifier_.num_classes()), 0.0);
    obs[base + static_cast<std::size_t>(state_.target_class)] = 1.0;
  }
  return obs;
}

DeletionTrace run_episode(Environment& env, Policy& policy, std::shared_ptr<const ImageTensor> image,
                          int target_class, std::uint64_t seed) {
  const EnvState& state = env.reset(std::move(image), target_class, seed);
  DeletionTrace trace;
  trace.initial_score = state.scores.front();
  trace.entries.reserve(static_cast<std::size_t>(env.horizon()));
  while (!env.done()) {
    const int action = policy.act(env);
    const StepOutcome outcome = env.step(action);
    trace.entries.push_back({action, outcome.delta, -outcome.reward});
  }
  return trace;
}

}  // namespace rexl
