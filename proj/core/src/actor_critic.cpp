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

#include "rexl/agent/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rexl/core/error.hpp"

namespace rexl {

double Trajectory::episode_return() const noexcept {
  double total = 0.0;
  for (const auto& step : steps) total += step.reward;
  return total;
}

std::vector<ReturnAdvantage> compute_returns_and_advantages(const Trajectory& trajectory,
                                                            const PolicyParams& params, double gamma) {
  const auto n = trajectory.steps.size();
  std::vector<ReturnAdvantage> out(n);
  double g = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    g = trajectory.steps[i].reward + gamma * g;
    out[i].ret = g;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i].advantage = out[i].ret - policy_forward(params, trajectory.steps[i].observation).value;
  }
  return out;
}

namespace {

struct StepTerms {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
};

// Loss terms of one step; accumulates scaled gradients into `grad`.
StepTerms step_loss(const PolicyParams& params, const Transition& step, double ret, bool replayed,
                    const LossWeights& weights, double scale, PolicyParams* grad) {
  nn::Mlp::Tape tape;
  const auto features_span = params.trunk.forward(step.observation, tape);
  const std::vector<double> features(features_span.begin(), features_span.end());
  const auto actions = static_cast<std::size_t>(params.num_actions());
  require(step.action >= 0 && static_cast<std::size_t>(step.action) < actions, "action out of range");

  std::vector<double> probs(actions);
  params.policy_head.forward(features, probs);
  nn::softmax_inplace(probs);
  double value = 0.0;
  params.value_head.forward(features, std::span<double>(&value, 1));

  const auto a = static_cast<std::size_t>(step.action);
  const double advantage = ret - value;
  double rho = 1.0;
  if (replayed) {
    require(step.behavior_prob > 0.0, "replayed step has no behavior probability");
    rho = std::min(weights.importance_clip, probs[a] / step.behavior_prob);
  }
  const double log_pa = std::log(std::max(probs[a], 1e-300));
  double entropy = 0.0;
  std::vector<double> log_p(actions);
  for (std::size_t i = 0; i < actions; ++i) {
    log_p[i] = probs[i] > 0.0 ? std::log(probs[i]) : 0.0;
    entropy -= probs[i] * log_p[i];
  }

  StepTerms terms{-rho * advantage * log_pa, advantage * advantage, entropy};
  if (grad == nullptr) return terms;

  // d/dz of -c A log pi(a):  -c A (onehot(a) - p)
  // d/dz of -c_e H:           c_e p_i (log p_i + H)
  std::vector<double> dlogits(actions);
  const double pg = rho * advantage;
  for (std::size_t i = 0; i < actions; ++i) {
    const double onehot = i == a ? 1.0 : 0.0;
    dlogits[i] = scale * (-pg * (onehot - probs[i]) +
                          weights.entropy_coef * probs[i] * (log_p[i] + entropy));
  }
  // d/dV of c_v (G - V)^2
  const double dvalue = scale * (-2.0 * weights.value_coef * advantage);

  std::vector<double> dfeatures(features.size(), 0.0);
  std::vector<double> dfeat_value(features.size(), 0.0);
  params.policy_head.backward(features, dlogits, grad->policy_head, dfeatures);
  params.value_head.backward(features, std::span<const double>(&dvalue, 1), grad->value_head,
                             dfeat_value);
  for (std::size_t i = 0; i < dfeatures.size(); ++i) dfeatures[i] += dfeat_value[i];
  params.trunk.backward(tape, dfeatures, grad->trunk);
  return terms;
}

void accumulate(const PolicyParams& params, std::span<const Trajectory> batch, bool replayed,
                const LossWeights& weights, double scale, PolicyParams* grad, LossDiagnostics& diag) {
  for (const auto& trajectory : batch) {
    std::vector<double> returns(trajectory.steps.size());
    double g = 0.0;
    for (std::size_t i = trajectory.steps.size(); i-- > 0;) {
      g = trajectory.steps[i].reward + params.gamma * g;
      returns[i] = g;
    }
    for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
      const auto terms = step_loss(params, trajectory.steps[i], returns[i], replayed, weights, scale, grad);
      diag.policy += terms.policy;
      diag.value += terms.value;
      diag.entropy += terms.entropy;
    }
  }
}

std::size_t count_steps(std::span<const Trajectory> batch) {
  std::size_t n = 0;
  for (const auto& t : batch) n += t.steps.size();
  return n;
}

}  // namespace

LossDiagnostics actor_critic_loss(const PolicyParams& params, std::span<const Trajectory> on_policy,
                                  std::span<const Trajectory> replayed, const LossWeights& weights,
                                  PolicyParams* grad) {
  LossDiagnostics diag;
  diag.steps = count_steps(on_policy) + count_steps(replayed);
  require(diag.steps > 0, "actor-critic loss needs at least one step");
  if (grad != nullptr) *grad = params.zeros_like();
  const double scale = 1.0 / static_cast<double>(diag.steps);
  accumulate(params, on_policy, false, weights, scale, grad, diag);
  accumulate(params, replayed, true, weights, scale, grad, diag);
  diag.policy *= scale;
  diag.value *= scale;
  diag.entropy *= scale;
  diag.total = diag.policy + weights.value_coef * diag.value - weights.entropy_coef * diag.entropy;
  if (grad != nullptr) {
    const auto tensors = parameter_tensors(*grad);
    diag.grad_norm = nn::global_norm(tensors);
  }
  return diag;
}

LossDiagnostics actor_critic_update(PolicyParams& params, nn::RmsProp& optimizer,
                                    std::span<const Trajectory> on_policy,
                                    std::span<const Trajectory> replayed, const UpdateConfig& config) {
  PolicyParams grad;
  auto diag = actor_critic_loss(params, on_policy, replayed, config.weights, &grad);
  auto grads = parameter_tensors(grad);
  if (!std::isfinite(diag.total) || !nn::all_finite(grads) || !std::isfinite(diag.grad_norm)) {
    std::ostringstream msg;
    msg << "non-finite loss or gradient: total=" << diag.total << " policy=" << diag.policy
        << " value=" << diag.value << " entropy=" << diag.entropy << " grad_norm=" << diag.grad_norm
        << " steps=" << diag.steps;
    throw TrainingError(msg.str());
  }
  if (config.max_grad_norm > 0.0 && diag.grad_norm > config.max_grad_norm) {
    nn::scale(grads, config.max_grad_norm / diag.grad_norm);
  }
  auto tensors = parameter_tensors(params);
  optimizer.step(tensors, grads);
  return diag;
}

}  // namespace rexl
