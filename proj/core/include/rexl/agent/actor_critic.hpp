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

#include <span>
#include <vector>

#include "rexl/agent/policy.hpp"
#include "rexl/nn/optim.hpp"

namespace rexl {

// One environment step as seen by the learner. The next observation of step
// t is the observation of step t+1, or Trajectory::final_observation.
struct Transition {
  Observation observation;
  int action = 0;
  double reward = 0.0;         // r(t+1)
  bool done = false;
  double behavior_prob = 1.0;  // mu(a | s) of the policy that acted
};

struct Trajectory {
  std::vector<Transition> steps;
  Observation final_observation;

  double episode_return() const noexcept;
};

struct ReturnAdvantage {
  double ret = 0.0;        // G_t = sum_{i >= t} gamma^(i-t) r(i+1)
  double advantage = 0.0;  // G_t - V(s_t)
};

std::vector<ReturnAdvantage> compute_returns_and_advantages(const Trajectory& trajectory,
                                                            const PolicyParams& params, double gamma);

struct LossWeights {
  double value_coef = 1.0;
  double entropy_coef = 0.01;
  double importance_clip = 10.0;  // replayed steps only
};

struct LossDiagnostics {
  double total = 0.0;
  double policy = 0.0;   // mean of -rho A log pi(a|s)
  double value = 0.0;    // mean of (G - V)^2
  double entropy = 0.0;  // mean policy entropy
  double grad_norm = 0.0;
  std::size_t steps = 0;
};

// Mean over all steps of
//   -rho_t A_t log pi(a_t|s_t) + c_v (G_t - V(s_t))^2 - c_e H(pi(.|s_t)).
// A_t and rho_t are constants. rho_t = 1 for on-policy trajectories and
// min(clip, pi/mu) for replayed ones. When `grad` is non-null it receives
// dLoss/dparams (overwritten).
LossDiagnostics actor_critic_loss(const PolicyParams& params, std::span<const Trajectory> on_policy,
                                  std::span<const Trajectory> replayed, const LossWeights& weights,
                                  PolicyParams* grad);

struct UpdateConfig {
  LossWeights weights;
  double max_grad_norm = 0.5;
};

// One RMSProp step on the loss above after global-norm clipping. Throws
// TrainingError (with the diagnostics in the message) on a non-finite loss or
// gradient; params are left untouched in that case.
LossDiagnostics actor_critic_update(PolicyParams& params, nn::RmsProp& optimizer,
                                    std::span<const Trajectory> on_policy,
                                    std::span<const Trajectory> replayed, const UpdateConfig& config);

}  // namespace rexl
