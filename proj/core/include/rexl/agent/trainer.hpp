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
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rexl/agent/actor_critic.hpp"
#include "rexl/agent/policy.hpp"
#include "rexl/classifier/classifier.hpp"
#include "rexl/nn/optim.hpp"

namespace rexl {

// Everything needed to run one training episode.
struct EpisodeSpec {
  std::shared_ptr<const ImageTensor> image;
  int target_class = 0;
  std::shared_ptr<Classifier> classifier;
  std::string image_id;
};

// Supplies training episodes. episode(i) must be a pure function of i so
// training is reproducible and resumable.
class EpisodeSource {
 public:
  virtual ~EpisodeSource() = default;
  virtual EpisodeSpec episode(std::uint64_t index) = 0;
};

// Draws images uniformly (seeded by episode index) from a fixed list, all
// scored by one classifier.
class ImageListSource final : public EpisodeSource {
 public:
  struct Item {
    std::shared_ptr<const ImageTensor> image;
    int label = 0;
    std::string id;
  };

  ImageListSource(std::shared_ptr<Classifier> classifier, std::vector<Item> items, std::uint64_t seed);
  EpisodeSpec episode(std::uint64_t index) override;
  const std::vector<Item>& items() const noexcept { return items_; }

 private:
  std::shared_ptr<Classifier> classifier_;
  std::vector<Item> items_;
  std::uint64_t seed_;
};

struct TrainConfig {
  std::int64_t total_steps = 2'000'000;
  int steps_per_update = 490;
  double value_coef = 1.0;
  double rms_alpha = 0.9;
  double rms_epsilon = 1e-5;
  double learning_rate = 1e-4;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;
  double importance_clip = 10.0;
  std::size_t replay_capacity = 0;    // episodes; 0 disables replay
  std::size_t replay_per_update = 0;  // replayed episodes added to each update
  std::vector<int> hidden{256, 128};
  std::uint64_t seed = 0;
  int threads = 1;
  int transport_retries = 3;
  int checkpoint_every = 0;  // updates; 0 disables
  std::filesystem::path checkpoint_path;

  void validate() const;
};

// What the trained agent is for.
struct AgentSetup {
  AgentScope scope = AgentScope::kClass;
  int class_id = 0;
  ObservationSpec observation;
  double gamma = 1.0;
};

struct TrainLogRow {
  std::int64_t step = 0;
  double mean_return = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainState {
  PolicyParams params;
  std::vector<double> optimizer_state;
  std::int64_t steps = 0;
  std::int64_t episodes = 0;
  std::int64_t updates = 0;
  std::int64_t transport_retries = 0;
  std::deque<Trajectory> replay;
  std::vector<TrainLogRow> log;
  std::set<std::string> image_ids;
  std::set<int> classes;
};

inline constexpr std::string_view kCheckpointFormat = "rexl-checkpoint/1";

class Trainer {
 public:
  Trainer(EpisodeSource& source, AgentSetup setup, TrainConfig config);

  // Runs updates until total_steps is reached, or until `max_updates`
  // further updates when positive. Returns true once training is complete.
  bool run(std::int64_t max_updates = 0);
  bool finished() const noexcept { return state_.steps >= config_.total_steps; }

  void save_checkpoint(const std::filesystem::path& path) const;
  // Replaces the current state; the checkpoint must come from the same setup.
  void load_checkpoint(const std::filesystem::path& path);

  const TrainState& state() const noexcept { return state_; }
  const TrainConfig& config() const noexcept { return config_; }
  int episodes_per_update() const noexcept;

  std::function<void(const TrainLogRow&)> on_update;

 private:
  Trajectory rollout(std::uint64_t episode_index, int& retries) const;
  void update_once();

  EpisodeSource& source_;
  AgentSetup setup_;
  TrainConfig config_;
  TrainState state_;
  nn::RmsProp optimizer_;
};

// Convenience: fresh trainer run to completion.
TrainState train(EpisodeSource& source, const AgentSetup& setup, const TrainConfig& config);

}  // namespace rexl
