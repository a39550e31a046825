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

#include "rexl/agent/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "json_util.hpp"
#include "rexl/core/encoding.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/parallel.hpp"
#include "rexl/environment/environment.hpp"

namespace rexl {

namespace {

constexpr std::uint64_t kInitStream = 0x1a17'0000'0000'0001ULL;
constexpr std::uint64_t kReplayStream = 0x4e91'0000'0000'0002ULL;
constexpr std::uint64_t kNoiseSalt = 0x6e6f'6973'6500'0003ULL;

int observation_width(const ObservationSpec& obs) {
  return obs.pool * obs.pool * obs.input.channels + (obs.one_hot_class ? obs.num_classes : 0);
}

int sample_action(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    cumulative += probs[a];
    if (u < cumulative) return static_cast<int>(a);
  }
  // Rounding left u above the total; take the last action with mass.
  for (std::size_t a = probs.size(); a-- > 0;) {
    if (probs[a] > 0.0) return static_cast<int>(a);
  }
  return 0;
}

std::string doubles_to_base64(std::span<const double> values) {
  std::vector<std::uint8_t> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return base64_encode(bytes);
}

std::vector<double> doubles_from_base64(std::string_view text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) throw FormatError("checkpoint: packed doubles have a partial value");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

}  // namespace

ImageListSource::ImageListSource(std::shared_ptr<Classifier> classifier, std::vector<Item> items,
                                 std::uint64_t seed)
    : classifier_(std::move(classifier)), items_(std::move(items)), seed_(seed) {
  require(classifier_ != nullptr, "image source needs a classifier");
  require(!items_.empty(), "image source needs at least one image");
}

EpisodeSpec ImageListSource::episode(std::uint64_t index) {
  const auto& item = items_[mix64(seed_, index) % items_.size()];
  return {item.image, item.label, classifier_, item.id};
}

void TrainConfig::validate() const {
  if (total_steps < 1) throw ConfigError("total_steps must be positive");
  if (steps_per_update < 1) throw ConfigError("steps_per_update must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(rms_alpha >= 0.0 && rms_alpha < 1.0)) throw ConfigError("rms_alpha must be in [0, 1)");
  if (!(rms_epsilon > 0.0)) throw ConfigError("rms_epsilon must be positive");
  if (value_coef < 0.0 || entropy_coef < 0.0) throw ConfigError("loss weights must be nonnegative");
  if (!(importance_clip > 0.0)) throw ConfigError("importance_clip must be positive");
  if (hidden.empty()) throw ConfigError("hidden must list at least one layer width");
  for (int w : hidden) {
    if (w < 1) throw ConfigError("hidden widths must be positive");
  }
  if (transport_retries < 0) throw ConfigError("transport_retries must be nonnegative");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be nonnegative");
  if (replay_per_update > 0 && replay_capacity == 0) {
    throw ConfigError("replay_per_update needs a nonzero replay_capacity");
  }
}

Trainer::Trainer(EpisodeSource& source, AgentSetup setup, TrainConfig config)
    : source_(source),
      setup_(std::move(setup)),
      config_(std::move(config)),
      optimizer_(config_.learning_rate, config_.rms_alpha, config_.rms_epsilon) {
  config_.validate();
  require(setup_.gamma >= 0.0 && setup_.gamma <= 1.0, "gamma must be in [0, 1]");
  const auto& obs = setup_.observation;
  require(obs.k >= 1 && obs.pool >= 1 && obs.input.size() > 0, "observation spec is incomplete");
  Rng rng(config_.seed, kInitStream);
  state_.params = init_policy(observation_width(obs), obs.k * obs.k, config_.hidden, rng);
  state_.params.scope = setup_.scope;
  state_.params.class_id = setup_.class_id;
  state_.params.gamma = setup_.gamma;
  state_.params.observation = obs;
}

int Trainer::episodes_per_update() const noexcept {
  const int horizon = setup_.observation.k * setup_.observation.k;
  return (config_.steps_per_update + horizon - 1) / horizon;
}

Trajectory Trainer::rollout(std::uint64_t episode_index, int& retries) const {
  for (int attempt = 0;; ++attempt) {
    try {
      const EpisodeSpec spec = source_.episode(episode_index);
      require(spec.classifier != nullptr && spec.image != nullptr, "episode source returned no data");
      Environment env(*spec.classifier, setup_.observation.env_config());
      env.reset(spec.image, spec.target_class, mix64(config_.seed ^ kNoiseSalt, episode_index));
      Rng rng(config_.seed, episode_index);
      Trajectory trajectory;
      trajectory.steps.reserve(static_cast<std::size_t>(env.horizon()));
      while (!env.done()) {
        Transition step;
        step.observation = env.observe();
        const auto out = policy_forward(state_.params, step.observation);
        step.action = sample_action(out.probs, rng);
        step.behavior_prob = out.probs[static_cast<std::size_t>(step.action)];
        const auto outcome = env.step(step.action);
        step.reward = outcome.reward;
        step.done = outcome.done;
        trajectory.steps.push_back(std::move(step));
      }
      trajectory.final_observation = env.observe();
      return trajectory;
    } catch (const TransportError&) {
      if (attempt >= config_.transport_retries) throw;
      ++retries;
    }
  }
}

void Trainer::update_once() {
  const int horizon = setup_.observation.k * setup_.observation.k;
  const std::int64_t remaining = config_.total_steps - state_.steps;
  const auto n = static_cast<std::size_t>(
      std::min<std::int64_t>(episodes_per_update(), (remaining + horizon - 1) / horizon));

  std::vector<EpisodeSpec> specs;
  specs.reserve(n);
  bool thread_safe = true;
  for (std::size_t i = 0; i < n; ++i) {
    specs.push_back(source_.episode(static_cast<std::uint64_t>(state_.episodes) + i));
    if (specs.back().classifier && !specs.back().classifier->thread_safe()) thread_safe = false;
  }

  std::vector<Trajectory> batch(n);
  std::vector<int> retries(n, 0);
  const int threads = thread_safe ? resolve_threads(config_.threads) : 1;
  parallel_for(n, threads, [&](std::size_t i) {
    batch[i] = rollout(static_cast<std::uint64_t>(state_.episodes) + i, retries[i]);
  });

  std::vector<Trajectory> replayed;
  if (config_.replay_per_update > 0 && !state_.replay.empty()) {
    Rng rng(config_.seed, kReplayStream + static_cast<std::uint64_t>(state_.updates));
    const int size = static_cast<int>(state_.replay.size());
    for (std::size_t i = 0; i < config_.replay_per_update; ++i) {
      replayed.push_back(state_.replay[static_cast<std::size_t>(rng.uniform_int(0, size - 1))]);
    }
  }

  UpdateConfig update;
  update.weights = {config_.value_coef, config_.entropy_coef, config_.importance_clip};
  update.max_grad_norm = config_.max_grad_norm;
  const auto diag = actor_critic_update(state_.params, optimizer_, batch, replayed, update);

  double total_return = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    state_.transport_retries += retries[i];
    total_return += batch[i].episode_return();
    state_.steps += static_cast<std::int64_t>(batch[i].steps.size());
    state_.image_ids.insert(specs[i].image_id);
    state_.classes.insert(specs[i].target_class);
  }
  state_.episodes += static_cast<std::int64_t>(n);
  state_.updates += 1;
  state_.optimizer_state = optimizer_.square_average();
  if (config_.replay_capacity > 0) {
    for (auto& t : batch) {
      state_.replay.push_back(std::move(t));
      if (state_.replay.size() > config_.replay_capacity) state_.replay.pop_front();
    }
  }
  TrainLogRow row{state_.steps, total_return / static_cast<double>(n), diag.policy, diag.value,
                  diag.entropy};
  state_.log.push_back(row);
  if (on_update) on_update(row);

  if (config_.checkpoint_every > 0 && !config_.checkpoint_path.empty() &&
      state_.updates % config_.checkpoint_every == 0) {
    save_checkpoint(config_.checkpoint_path);
  }
}

bool Trainer::run(std::int64_t max_updates) {
  std::int64_t done = 0;
  while (!finished() && (max_updates <= 0 || done < max_updates)) {
    update_once();
    ++done;
  }
  return finished();
}

void Trainer::save_checkpoint(const std::filesystem::path& path) const {
  using detail::json;
  json j;
  j["format"] = kCheckpointFormat;
  j["params"] = json::parse(policy_to_json(state_.params));
  j["optimizer"] = doubles_to_base64(state_.optimizer_state);
  j["steps"] = state_.steps;
  j["episodes"] = state_.episodes;
  j["updates"] = state_.updates;
  j["transport_retries"] = state_.transport_retries;
  j["seed"] = config_.seed;
  json replay = json::array();
  for (const auto& t : state_.replay) {
    json steps = json::array();
    for (const auto& s : t.steps) {
      steps.push_back({{"obs", doubles_to_base64(s.observation)},
                       {"action", s.action},
                       {"reward", s.reward},
                       {"done", s.done},
                       {"mu", s.behavior_prob}});
    }
    replay.push_back({{"steps", std::move(steps)}, {"final", doubles_to_base64(t.final_observation)}});
  }
  j["replay"] = std::move(replay);
  json log = json::array();
  for (const auto& r : state_.log) {
    log.push_back({r.step, r.mean_return, r.policy_loss, r.value_loss, r.entropy});
  }
  j["log"] = std::move(log);
  j["image_ids"] = state_.image_ids;
  j["classes"] = state_.classes;
  detail::write_text_file(path, j.dump());
}

void Trainer::load_checkpoint(const std::filesystem::path& path) {
  using detail::json;
  const json j = detail::parse_json(detail::read_text_file(path), "checkpoint");
  detail::check_format(j, kCheckpointFormat, "checkpoint");
  TrainState loaded;
  try {
    loaded.params = policy_from_json(j.at("params").dump());
    loaded.optimizer_state = doubles_from_base64(j.at("optimizer").get<std::string>());
    loaded.steps = j.at("steps").get<std::int64_t>();
    loaded.episodes = j.at("episodes").get<std::int64_t>();
    loaded.updates = j.at("updates").get<std::int64_t>();
    loaded.transport_retries = j.at("transport_retries").get<std::int64_t>();
    if (j.at("seed").get<std::uint64_t>() != config_.seed) {
      throw ConfigError("checkpoint was written with a different seed");
    }
    for (const auto& t : j.at("replay")) {
      Trajectory trajectory;
      for (const auto& s : t.at("steps")) {
        trajectory.steps.push_back({doubles_from_base64(s.at("obs").get<std::string>()),
                                    s.at("action").get<int>(), s.at("reward").get<double>(),
                                    s.at("done").get<bool>(), s.at("mu").get<double>()});
      }
      trajectory.final_observation = doubles_from_base64(t.at("final").get<std::string>());
      loaded.replay.push_back(std::move(trajectory));
    }
    for (const auto& r : j.at("log")) {
      loaded.log.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<double>(), r.at(2).get<double>(),
                            r.at(3).get<double>(), r.at(4).get<double>()});
    }
    loaded.image_ids = j.at("image_ids").get<std::set<std::string>>();
    loaded.classes = j.at("classes").get<std::set<int>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
  const auto& p = loaded.params;
  if (p.num_actions() != state_.params.num_actions() || p.input_width() != state_.params.input_width() ||
      p.scope != setup_.scope || !(p.observation == setup_.observation)) {
    throw ConfigError("checkpoint does not match the training setup");
  }
  state_ = std::move(loaded);
  optimizer_ = nn::RmsProp(config_.learning_rate, config_.rms_alpha, config_.rms_epsilon);
  optimizer_.set_square_average(state_.optimizer_state);
}

TrainState train(EpisodeSource& source, const AgentSetup& setup, const TrainConfig& config) {
  Trainer trainer(source, setup, config);
  trainer.run();
  return trainer.state();
}

}  // namespace rexl
