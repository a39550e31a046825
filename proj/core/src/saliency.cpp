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

#include "rexl/saliency/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_util.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/filters.hpp"

namespace rexl {

int SaliencyMap::argmax() const noexcept {
  int best = 0;
  for (int i = 1; i < static_cast<int>(weights.size()); ++i) {
    if (weights[static_cast<std::size_t>(i)] > weights[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

void SaliencyMap::validate() const {
  require(k >= 1, "saliency map needs k >= 1");
  require(weights.size() == static_cast<std::size_t>(k) * static_cast<std::size_t>(k),
          "saliency map must have k*k weights");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must be in [0, 1]");
  for (double w : weights) require(std::isfinite(w) && w >= 0.0, "saliency weights must be finite and >= 0");
  if (normalized) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    require(std::abs(sum - 1.0) <= 1e-9, "normalized saliency weights must sum to 1");
  }
}

std::vector<double> accumulate_credit(const DeletionTrace& trace, int k, double lambda) {
  require(k >= 1, "accumulate_credit: k must be >= 1");
  require(lambda >= 0.0 && lambda <= 1.0, "accumulate_credit: lambda must be in [0, 1]");
  const int cells = k * k;
  std::vector<double> raw(static_cast<std::size_t>(cells), 0.0);
  double suffix = 0.0;
  for (std::size_t t = trace.entries.size(); t-- > 0;) {
    const auto& entry = trace.entries[t];
    require(entry.cell >= 0 && entry.cell < cells, "accumulate_credit: trace cell outside the grid");
    suffix = entry.delta + lambda * suffix;
    raw[static_cast<std::size_t>(entry.cell)] += suffix;
  }
  return raw;
}

SaliencyMap normalize_map(std::span<const double> raw, int k, double lambda) {
  require(raw.size() == static_cast<std::size_t>(k) * static_cast<std::size_t>(k),
          "normalize_map: expected k*k weights");
  SaliencyMap map;
  map.k = k;
  map.lambda = lambda;
  map.weights.resize(raw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    map.weights[i] = raw[i] > 0.0 ? raw[i] : 0.0;
    sum += map.weights[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    std::fill(map.weights.begin(), map.weights.end(), 1.0 / static_cast<double>(raw.size()));
    map.degenerate = true;
    return map;
  }
  for (double& w : map.weights) w /= sum;
  return map;
}

std::vector<int> ranked_cells(std::span<const double> weights) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)];
  });
  return order;
}

Field render_heatmap(const SaliencyMap& map, int height, int width, std::optional<double> sigma) {
  require(map.weights.size() == static_cast<std::size_t>(map.k) * static_cast<std::size_t>(map.k),
          "render_heatmap: malformed map");
  const double s = sigma.value_or(static_cast<double>(std::min(height, width)) / map.k);
  require(s >= 0.0, "render_heatmap: sigma must be >= 0");
  Field heat = bilinear_upsample(map.weights, map.k, height, width);
  if (s > 0.0) heat = gaussian_blur(heat, s);
  return heat;
}

namespace {

// Piecewise-linear blue -> cyan -> green -> yellow -> red.
void ramp(double t, float* rgb) {
  static constexpr double stops[5][3] = {
      {0.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<float>(stops[i][c] + f * (stops[i + 1][c] - stops[i][c]));
}

}  // namespace

ImageTensor colorize(const Field& heat) {
  require(heat.height >= 1 && heat.width >= 1, "colorize: empty field");
  const auto [lo_it, hi_it] = std::minmax_element(heat.values.begin(), heat.values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  ImageTensor out(heat.height, heat.width, 3, ValueRange{0.0, 1.0});
  auto data = out.data();
  for (std::size_t i = 0; i < heat.values.size(); ++i) {
    ramp(span > 0.0 ? (heat.values[i] - lo) / span : 0.0, &data[i * 3]);
  }
  return out;
}

ImageTensor overlay(const ImageTensor& image, const Field& heat, double alpha) {
  require(image.height() == heat.height && image.width() == heat.width, "overlay: size mismatch");
  require(alpha >= 0.0 && alpha <= 1.0, "overlay: alpha must be in [0, 1]");
  ImageTensor out = colorize(heat);
  auto dst = out.data();
  const auto src = image.data();
  const auto& range = image.range();
  const int c = image.channels();
  for (std::size_t p = 0; p < heat.values.size(); ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      const float v = src[p * static_cast<std::size_t>(c) + static_cast<std::size_t>(c == 1 ? 0 : ch)];
      const double base = std::clamp((v - range.lo) / range.width(), 0.0, 1.0);
      auto& d = dst[p * 3 + static_cast<std::size_t>(ch)];
      d = static_cast<float>((1.0 - alpha) * base + alpha * d);
    }
  }
  return out;
}

Explanation explain_with_policy(Policy& policy, Classifier& classifier, const EnvConfig& env_config,
                                const ImageTensor& image, int target_class, double lambda,
                                std::uint64_t seed) {
  Environment env(classifier, env_config);
  Explanation out;
  out.trace = run_episode(env, policy, std::make_shared<const ImageTensor>(image), target_class, seed);
  out.calls = env.classifier_calls();
  out.map = normalize_map(accumulate_credit(out.trace, env_config.k, lambda), env_config.k, lambda);
  return out;
}

Explanation explain(const PolicyParams& params, Classifier& classifier, const ImageTensor& image,
                    int target_class, double lambda, std::uint64_t seed) {
  params.validate();
  require(image.shape() == params.observation.input, "explain: image shape differs from the agent's input");
  require(target_class >= 0 && target_class < classifier.num_classes(), "explain: class out of range");
  if (params.scope != AgentScope::kDataset) {
    require(target_class == params.class_id, "explain: agent was trained for a different class");
  }
  GreedyAgentPolicy policy(params);
  return explain_with_policy(policy, classifier, params.observation.env_config(), image, target_class,
                             lambda, seed);
}

std::string saliency_to_json(const SaliencyMap& map) {
  detail::json j;
  j["format"] = kSaliencyFormat;
  j["k"] = map.k;
  j["lambda"] = map.lambda;
  j["weights"] = map.weights;
  j["degenerate"] = map.degenerate;
  return j.dump();
}

SaliencyMap saliency_from_json(const std::string& text) {
  const auto j = detail::parse_json(text, "saliency map");
  detail::check_format(j, kSaliencyFormat, "saliency map");
  SaliencyMap map;
  try {
    map.k = j.at("k").get<int>();
    map.lambda = j.at("lambda").get<double>();
    map.weights = j.at("weights").get<std::vector<double>>();
    map.degenerate = j.at("degenerate").get<bool>();
    map.validate();
  } catch (const detail::json::exception& e) {
    throw FormatError(std::string("saliency map: ") + e.what());
  } catch (const ContractError& e) {
    throw FormatError(std::string("saliency map: ") + e.what());
  }
  return map;
}

std::string pixel_saliency_to_json(const Field& field, std::string_view method) {
  detail::json j;
  j["format"] = kSaliencyFormat;
  j["resolution"] = "pixel";
  j["method"] = method;
  j["height"] = field.height;
  j["width"] = field.width;
  j["weights"] = field.values;
  return j.dump();
}

}  // namespace rexl
