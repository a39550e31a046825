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

#include "rexl/classifier/tiny_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_util.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/nn/optim.hpp"

namespace rexl {

namespace {

void conv_forward(const ConvLayer& conv, int pool, std::span<const double> in, std::vector<double>& out) {
  const int channels = conv.channels;
  const int taps = 9 * channels;
  out.assign(static_cast<std::size_t>(pool * pool * conv.filters), 0.0);
  for (int y = 0; y < pool; ++y) {
    for (int x = 0; x < pool; ++x) {
      double* dst = out.data() + static_cast<std::ptrdiff_t>((y * pool + x) * conv.filters);
      for (int f = 0; f < conv.filters; ++f) {
        const double* wf = conv.w.data() + static_cast<std::ptrdiff_t>(f * taps);
        double acc = conv.b[static_cast<std::size_t>(f)];
        for (int dy = 0; dy < 3; ++dy) {
          const int sy = y + dy - 1;
          if (sy < 0 || sy >= pool) continue;
          for (int dx = 0; dx < 3; ++dx) {
            const int sx = x + dx - 1;
            if (sx < 0 || sx >= pool) continue;
            const double* src = in.data() + static_cast<std::ptrdiff_t>((sy * pool + sx) * channels);
            const double* wt = wf + (dy * 3 + dx) * channels;
            for (int c = 0; c < channels; ++c) acc += wt[c] * src[c];
          }
        }
        dst[f] = acc > 0.0 ? acc : 0.0;
      }
    }
  }
}

// `dout` is the gradient w.r.t. the activated conv output.
void conv_backward(const ConvLayer& conv, int pool, std::span<const double> in,
                   std::span<const double> out, std::span<const double> dout, ConvLayer& grad) {
  const int channels = conv.channels;
  const int taps = 9 * channels;
  for (int y = 0; y < pool; ++y) {
    for (int x = 0; x < pool; ++x) {
      const auto base = static_cast<std::size_t>((y * pool + x) * conv.filters);
      for (int f = 0; f < conv.filters; ++f) {
        if (out[base + static_cast<std::size_t>(f)] <= 0.0) continue;
        const double g = dout[base + static_cast<std::size_t>(f)];
        if (g == 0.0) continue;
        grad.b[static_cast<std::size_t>(f)] += g;
        double* gw = grad.w.data() + static_cast<std::ptrdiff_t>(f * taps);
        for (int dy = 0; dy < 3; ++dy) {
          const int sy = y + dy - 1;
          if (sy < 0 || sy >= pool) continue;
          for (int dx = 0; dx < 3; ++dx) {
            const int sx = x + dx - 1;
            if (sx < 0 || sx >= pool) continue;
            const double* src = in.data() + static_cast<std::ptrdiff_t>((sy * pool + sx) * channels);
            double* gt = gw + (dy * 3 + dx) * channels;
            for (int c = 0; c < channels; ++c) gt[c] += g * src[c];
          }
        }
      }
    }
  }
}

void apply_head(HeadKind head, std::span<double> logits) {
  if (head == HeadKind::kSoftmax) {
    nn::softmax_inplace(logits);
  } else {
    for (double& v : logits) v = 1.0 / (1.0 + std::exp(-v));
  }
}

struct Forward {
  std::vector<double> conv_out;
  nn::Mlp::Tape tape;
  std::vector<double> probs;
};

void forward(const TinyNetParams& p, std::span<const double> features, Forward& f) {
  std::span<const double> mlp_in = features;
  if (p.conv) {
    conv_forward(*p.conv, p.pool, features, f.conv_out);
    mlp_in = f.conv_out;
  }
  const auto logits = p.mlp.forward(mlp_in, f.tape);
  f.probs.assign(logits.begin(), logits.end());
  apply_head(p.head, f.probs);
}

}  // namespace

int TinyNetParams::feature_width() const noexcept {
  const int spatial = pool * pool;
  return conv ? spatial * conv->filters : spatial * input.channels;
}

void TinyNetParams::validate() const {
  require(input.height >= 1 && input.width >= 1 && input.channels >= 1, "TinyNetParams: invalid input shape");
  require(pool >= 1 && pool <= input.height && pool <= input.width, "TinyNetParams: invalid pool size");
  require(!mlp.layers().empty(), "TinyNetParams: no dense layers");
  if (conv) {
    require(conv->channels == input.channels && conv->filters >= 1 &&
                conv->w.size() == static_cast<std::size_t>(conv->filters * 9 * conv->channels) &&
                conv->b.size() == static_cast<std::size_t>(conv->filters),
            "TinyNetParams: convolution shapes are inconsistent");
  }
  require(mlp.input_width() == feature_width(), "TinyNetParams: first dense layer does not match features");
  for (const auto& layer : mlp.layers()) {
    for (double v : layer.w) require(std::isfinite(v), "TinyNetParams: non-finite weight");
    for (double v : layer.b) require(std::isfinite(v), "TinyNetParams: non-finite bias");
  }
}

TinyNetClassifier::TinyNetClassifier(TinyNetParams params) : params_(std::move(params)) {
  params_.validate();
}

ClassScores TinyNetClassifier::score(const ImageTensor& image) {
  check_input(image);
  Forward f;
  forward(params_, average_pool(image, params_.pool), f);
  ClassScores out;
  out.kind = params_.head == HeadKind::kSoftmax ? ScoreKind::kSoftmax : ScoreKind::kMultilabel;
  out.scores = std::move(f.probs);
  for (double& s : out.scores) s = std::clamp(s, 0.0, 1.0);
  return out;
}

double classification_accuracy(Classifier& classifier, const LabeledDataset& dataset) {
  if (dataset.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const ClassScores s = classifier.score(dataset.images[i]);
    const auto best = std::max_element(s.scores.begin(), s.scores.end()) - s.scores.begin();
    if (best == dataset.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

TinyTrainResult train_tiny_classifier(const LabeledDataset& dataset, const TinyTrainConfig& config, Rng& rng) {
  require(dataset.size() > 0, "train_tiny_classifier: dataset is empty");
  require(dataset.labels.size() == dataset.images.size(), "train_tiny_classifier: label count mismatch");
  require(dataset.num_classes >= 2, "train_tiny_classifier: need at least two classes");
  for (int label : dataset.labels) {
    require(label >= 0 && label < dataset.num_classes, "train_tiny_classifier: label out of range");
  }
  const InputShape shape = dataset.images.front().shape();
  for (const auto& image : dataset.images) {
    require(image.shape() == shape, "train_tiny_classifier: images differ in shape");
  }
  require(config.epochs >= 1 && config.batch_size >= 1, "train_tiny_classifier: invalid schedule");

  TinyNetParams params;
  params.input = shape;
  params.pool = config.pool;
  params.head = config.head;
  int features = config.pool * config.pool * shape.channels;
  if (config.use_conv) {
    ConvLayer conv;
    conv.filters = config.conv_filters;
    conv.channels = shape.channels;
    const int fan_in = 9 * shape.channels;
    const double limit = std::sqrt(6.0 / (fan_in + conv.filters));
    conv.w.resize(static_cast<std::size_t>(conv.filters * fan_in));
    for (double& v : conv.w) v = rng.uniform(-limit, limit);
    conv.b.assign(static_cast<std::size_t>(conv.filters), 0.0);
    params.conv = std::move(conv);
    features = config.pool * config.pool * config.conv_filters;
  }
  std::vector<int> widths{features};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(dataset.num_classes);
  params.mlp = nn::Mlp::glorot(widths, false, rng);
  params.validate();

  std::vector<std::vector<double>> pooled(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) pooled[i] = average_pool(dataset.images[i], config.pool);

  nn::Adam optimizer(config.learning_rate);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto measure = [&] {
    std::size_t correct = 0;
    Forward f;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      forward(params, pooled[i], f);
      const auto best = std::max_element(f.probs.begin(), f.probs.end()) - f.probs.begin();
      if (best == dataset.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
  };

  TinyTrainResult result;
  Forward f;
  std::vector<double> dlogits;
  std::vector<double> dconv;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      nn::Mlp grad = params.mlp.zeros_like();
      std::optional<ConvLayer> conv_grad;
      if (params.conv) {
        conv_grad = *params.conv;
        std::fill(conv_grad->w.begin(), conv_grad->w.end(), 0.0);
        std::fill(conv_grad->b.begin(), conv_grad->b.end(), 0.0);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t j = start; j < end; ++j) {
        const std::size_t i = order[j];
        forward(params, pooled[i], f);
        dlogits = f.probs;
        dlogits[static_cast<std::size_t>(dataset.labels[i])] -= 1.0;
        for (double& g : dlogits) g *= inv;
        if (params.conv) {
          params.mlp.backward(f.tape, dlogits, grad, &dconv);
          conv_backward(*params.conv, params.pool, pooled[i], f.conv_out, dconv, *conv_grad);
        } else {
          params.mlp.backward(f.tape, dlogits, grad);
        }
      }
      std::vector<std::span<double>> p_tensors;
      std::vector<std::span<double>> g_tensors;
      nn::append_tensors(params.mlp, p_tensors);
      nn::append_tensors(grad, g_tensors);
      if (params.conv) {
        p_tensors.emplace_back(params.conv->w);
        p_tensors.emplace_back(params.conv->b);
        g_tensors.emplace_back(conv_grad->w);
        g_tensors.emplace_back(conv_grad->b);
      }
      optimizer.step(p_tensors, g_tensors);
    }
    result.epochs_run = epoch + 1;
    result.accuracy = measure();
    if (result.accuracy >= config.stop_accuracy) break;
  }
  if (result.accuracy < config.required_accuracy) {
    throw TrainingError("train_tiny_classifier: training accuracy " + std::to_string(result.accuracy) +
                        " below required " + std::to_string(config.required_accuracy) + " after " +
                        std::to_string(result.epochs_run) + " epochs");
  }
  result.params = std::move(params);
  return result;
}

std::string tiny_net_to_json(const TinyNetParams& params) {
  using detail::json;
  json layers = json::array();
  for (const auto& layer : params.mlp.layers()) layers.push_back(detail::dense_to_json(layer));
  json j{{"format", kTinyWeightsFormat},
         {"input", {{"height", params.input.height}, {"width", params.input.width}, {"channels", params.input.channels}}},
         {"pool", params.pool},
         {"layers", std::move(layers)},
         {"head", params.head == HeadKind::kSoftmax ? "softmax" : "sigmoid"}};
  if (params.conv) {
    j["conv"] = {{"filters", params.conv->filters}, {"channels", params.conv->channels},
                 {"w", params.conv->w}, {"b", params.conv->b}};
  }
  return j.dump();
}

TinyNetParams tiny_net_from_json(const std::string& text) {
  const auto j = detail::parse_json(text, "tiny net weights");
  detail::check_format(j, kTinyWeightsFormat, "tiny net weights");
  try {
    TinyNetParams p;
    const auto& in = j.at("input");
    p.input = {in.at("height").get<int>(), in.at("width").get<int>(), in.at("channels").get<int>()};
    p.pool = j.at("pool").get<int>();
    const auto head = j.at("head").get<std::string>();
    if (head == "softmax") {
      p.head = HeadKind::kSoftmax;
    } else if (head == "sigmoid") {
      p.head = HeadKind::kSigmoid;
    } else {
      throw FormatError("tiny net weights: unknown head \"" + head + "\"");
    }
    std::vector<nn::Dense> layers;
    for (const auto& l : j.at("layers")) layers.push_back(detail::dense_from_json(l));
    p.mlp = nn::Mlp(std::move(layers), false);
    if (j.contains("conv")) {
      const auto& c = j.at("conv");
      ConvLayer conv;
      conv.filters = c.at("filters").get<int>();
      conv.channels = c.at("channels").get<int>();
      conv.w = c.at("w").get<std::vector<double>>();
      conv.b = c.at("b").get<std::vector<double>>();
      p.conv = std::move(conv);
    }
    p.validate();
    return p;
  } catch (const detail::json::exception& e) {
    throw FormatError(std::string("tiny net weights: ") + e.what());
  } catch (const ContractError& e) {
    throw FormatError(std::string("tiny net weights: ") + e.what());
  }
}

void save_tiny_net(const std::filesystem::path& path, const TinyNetParams& params) {
  detail::write_text_file(path, tiny_net_to_json(params));
}

TinyNetParams load_tiny_net(const std::filesystem::path& path) {
  return tiny_net_from_json(detail::read_text_file(path));
}

}  // namespace rexl
