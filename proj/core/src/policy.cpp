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

#include "rexl/agent/policy.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "rexl/core/error.hpp"

namespace rexl {

std::string_view to_string(AgentScope scope) noexcept {
  switch (scope) {
    case AgentScope::kDataset:
      return "dataset";
    case AgentScope::kClass:
      return "class";
    case AgentScope::kImage:
      return "image";
  }
  return "class";
}

AgentScope parse_scope(std::string_view text) {
  if (text == "dataset") return AgentScope::kDataset;
  if (text == "class") return AgentScope::kClass;
  if (text == "image") return AgentScope::kImage;
  throw ConfigError("unknown agent scope \"" + std::string(text) + "\"");
}

std::size_t PolicyParams::parameter_count() const noexcept {
  return trunk.parameter_count() + policy_head.parameter_count() + value_head.parameter_count();
}

PolicyParams PolicyParams::zeros_like() const {
  PolicyParams out = *this;
  out.trunk.zero();
  out.policy_head.zero();
  out.value_head.zero();
  return out;
}

void PolicyParams::validate() const {
  require(!trunk.layers().empty(), "policy trunk has no layers");
  require(trunk.relu_on_output(), "policy trunk must end in a rectifier");
  const int features = trunk.output_width();
  require(policy_head.cols == features && value_head.cols == features,
          "policy heads do not match the trunk width");
  require(policy_head.rows >= 1, "policy head has no actions");
  require(value_head.rows == 1, "value head must have one output");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
  for (std::size_t i = 1; i < trunk.layers().size(); ++i) {
    require(trunk.layers()[i].cols == trunk.layers()[i - 1].rows, "policy trunk shapes do not chain");
  }
}

PolicyParams init_policy(int input_width, int num_actions, std::span<const int> hidden, Rng& rng,
                         bool zero_policy_head) {
  require(input_width >= 1 && num_actions >= 1, "policy needs inputs and actions");
  require(!hidden.empty(), "policy needs at least one hidden layer");
  std::vector<int> widths{input_width};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  PolicyParams params;
  params.trunk = nn::Mlp::glorot(widths, /*relu_on_output=*/true, rng);
  params.policy_head = nn::Dense::glorot(num_actions, hidden.back(), rng);
  if (zero_policy_head) params.policy_head.zero();
  params.value_head = nn::Dense::glorot(1, hidden.back(), rng);
  return params;
}

std::vector<std::span<double>> parameter_tensors(PolicyParams& params) {
  std::vector<std::span<double>> out;
  nn::append_tensors(params.trunk, out);
  nn::append_tensors(params.policy_head, out);
  nn::append_tensors(params.value_head, out);
  return out;
}

PolicyOutput policy_forward(const PolicyParams& params, std::span<const double> observation) {
  require(static_cast<int>(observation.size()) == params.input_width(),
          "observation width does not match the policy");
  nn::Mlp::Tape tape;
  const auto features = params.trunk.forward(observation, tape);
  PolicyOutput out;
  out.logits.resize(static_cast<std::size_t>(params.num_actions()));
  params.policy_head.forward(features, out.logits);
  out.probs = out.logits;
  nn::softmax_inplace(out.probs);
  double value = 0.0;
  params.value_head.forward(features, std::span<double>(&value, 1));
  out.value = value;
  return out;
}

int argmax_action(std::span<const double> probs) noexcept {
  int best = 0;
  for (int a = 1; a < static_cast<int>(probs.size()); ++a) {
    if (probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(best)]) best = a;
  }
  return best;
}

int GreedyAgentPolicy::act(const Environment& env) {
  require(params_.num_actions() == env.num_actions(), "policy action count does not match the grid");
  const auto out = policy_forward(params_, env.observe());
  return argmax_action(out.probs);
}

namespace {

using detail::json;

json mlp_to_json(const nn::Mlp& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) layers.push_back(detail::dense_to_json(layer));
  return layers;
}

}  // namespace

std::string policy_to_json(const PolicyParams& params) {
  params.validate();
  const auto& obs = params.observation;
  json j;
  j["format"] = kAgentWeightsFormat;
  j["scope"] = to_string(params.scope);
  j["class_id"] = params.class_id;
  j["gamma"] = params.gamma;
  j["observation"] = {{"height", obs.input.height},
                      {"width", obs.input.width},
                      {"channels", obs.input.channels},
                      {"k", obs.k},
                      {"pool", obs.pool},
                      {"one_hot_class", obs.one_hot_class},
                      {"num_classes", obs.num_classes}};
  j["layers"] = mlp_to_json(params.trunk);
  j["heads"] = {{"policy", detail::dense_to_json(params.policy_head)},
                {"value", detail::dense_to_json(params.value_head)}};
  return j.dump();
}

PolicyParams policy_from_json(const std::string& text) {
  const json j = detail::parse_json(text, "agent weights");
  detail::check_format(j, kAgentWeightsFormat, "agent weights");
  PolicyParams params;
  try {
    params.scope = parse_scope(j.at("scope").get<std::string>());
    params.class_id = j.at("class_id").get<int>();
    params.gamma = j.at("gamma").get<double>();
    const auto& obs = j.at("observation");
    params.observation.input = {obs.at("height").get<int>(), obs.at("width").get<int>(),
                                obs.at("channels").get<int>()};
    params.observation.k = obs.at("k").get<int>();
    params.observation.pool = obs.at("pool").get<int>();
    params.observation.one_hot_class = obs.at("one_hot_class").get<bool>();
    params.observation.num_classes = obs.at("num_classes").get<int>();
    std::vector<nn::Dense> layers;
    for (const auto& layer : j.at("layers")) layers.push_back(detail::dense_from_json(layer));
    params.trunk = nn::Mlp(std::move(layers), /*relu_on_output=*/true);
    params.policy_head = detail::dense_from_json(j.at("heads").at("policy"));
    params.value_head = detail::dense_from_json(j.at("heads").at("value"));
    params.validate();
  } catch (const json::exception& e) {
    throw FormatError(std::string("agent weights: ") + e.what());
  } catch (const ContractError& e) {
    throw FormatError(std::string("agent weights: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("agent weights: ") + e.what());
  }
  return params;
}

void save_params(const std::filesystem::path& path, const PolicyParams& params) {
  detail::write_text_file(path, policy_to_json(params));
}

PolicyParams load_params(const std::filesystem::path& path) {
  return policy_from_json(detail::read_text_file(path));
}

}  // namespace rexl
