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
#include <span>
#include <string>
#include <vector>

#include "rexl/core/image.hpp"
#include "rexl/core/rng.hpp"
#include "rexl/environment/environment.hpp"
#include "rexl/nn/layers.hpp"

namespace rexl {

// What the agent was trained to explain: a whole dataset (class passed as a
// one-hot input), one class, or one image.
enum class AgentScope { kDataset, kClass, kImage };

std::string_view to_string(AgentScope scope) noexcept;
AgentScope parse_scope(std::string_view text);

// How observations fed to the network are produced.
struct ObservationSpec {
  InputShape input{};
  int k = 7;
  int pool = 28;
  bool one_hot_class = false;
  int num_classes = 1;

  EnvConfig env_config() const noexcept { return {k, pool, one_hot_class}; }
  friend bool operator==(const ObservationSpec&, const ObservationSpec&) = default;
};

// Shared rectifier trunk with a policy head (one logit per action) and a
// scalar value head.
struct PolicyParams {
  nn::Mlp trunk;  // rectifier after every layer
  nn::Dense policy_head;
  nn::Dense value_head;
  AgentScope scope = AgentScope::kClass;
  int class_id = 0;
  double gamma = 1.0;
  ObservationSpec observation;

  int input_width() const noexcept { return trunk.input_width(); }
  int num_actions() const noexcept { return policy_head.rows; }
  std::size_t parameter_count() const noexcept;
  // Same shapes and metadata, every weight zero.
  PolicyParams zeros_like() const;
  void validate() const;
  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

// Hidden layers: uniform +-sqrt(6 / (fan_in + fan_out)), zero biases. The
// policy head is zero so the initial policy is uniform.
PolicyParams init_policy(int input_width, int num_actions, std::span<const int> hidden, Rng& rng,
                         bool zero_policy_head = true);

// Weight and bias arrays in a fixed order; gradients use the same order.
std::vector<std::span<double>> parameter_tensors(PolicyParams& params);

struct PolicyOutput {
  std::vector<double> probs;
  std::vector<double> logits;
  double value = 0.0;
};

PolicyOutput policy_forward(const PolicyParams& params, std::span<const double> observation);

// Greedy action: highest probability, ties to the lowest index.
int argmax_action(std::span<const double> probs) noexcept;

// Plays the argmax of the policy at every step.
class GreedyAgentPolicy final : public Policy {
 public:
  explicit GreedyAgentPolicy(const PolicyParams& params) : params_(params) {}
  int act(const Environment& env) override;

 private:
  const PolicyParams& params_;
};

inline constexpr std::string_view kAgentWeightsFormat = "rexl-agent/1";

std::string policy_to_json(const PolicyParams& params);
// Throws VersionError on a wrong "format" and FormatError on anything else
// unreadable.
PolicyParams policy_from_json(const std::string& text);
void save_params(const std::filesystem::path& path, const PolicyParams& params);
PolicyParams load_params(const std::filesystem::path& path);

}  // namespace rexl
