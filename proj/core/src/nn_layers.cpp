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

#include "rexl/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rexl/core/error.hpp"

namespace rexl::nn {

Dense::Dense(int rows_, int cols_)
    : rows(rows_),
      cols(cols_),
      w(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), 0.0),
      b(static_cast<std::size_t>(rows_), 0.0) {
  require(rows_ >= 1 && cols_ >= 1, "Dense: rows and cols must be >= 1");
}

Dense Dense::glorot(int rows, int cols, Rng& rng) {
  Dense layer(rows, cols);
  const double limit = std::sqrt(6.0 / (rows + cols));
  for (double& v : layer.w) v = rng.uniform(-limit, limit);
  return layer;
}

void Dense::forward(std::span<const double> in, std::span<double> out) const {
  require(in.size() == static_cast<std::size_t>(cols) && out.size() == static_cast<std::size_t>(rows),
          "Dense::forward: shape mismatch");
  const double* weights = w.data();
  for (int r = 0; r < rows; ++r) {
    const double* row = weights + static_cast<std::ptrdiff_t>(r) * cols;
    double acc = b[static_cast<std::size_t>(r)];
    for (int c = 0; c < cols; ++c) acc += row[c] * in[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

void Dense::backward(std::span<const double> in, std::span<const double> dout, Dense& grad,
                     std::span<double> din) const {
  require(in.size() == static_cast<std::size_t>(cols) && dout.size() == static_cast<std::size_t>(rows),
          "Dense::backward: shape mismatch");
  if (!din.empty()) {
    require(din.size() == static_cast<std::size_t>(cols), "Dense::backward: din shape mismatch");
    std::fill(din.begin(), din.end(), 0.0);
  }
  for (int r = 0; r < rows; ++r) {
    const double g = dout[static_cast<std::size_t>(r)];
    if (g == 0.0) continue;
    grad.b[static_cast<std::size_t>(r)] += g;
    double* grow = grad.w.data() + static_cast<std::ptrdiff_t>(r) * cols;
    for (int c = 0; c < cols; ++c) grow[c] += g * in[static_cast<std::size_t>(c)];
    if (!din.empty()) {
      const double* row = w.data() + static_cast<std::ptrdiff_t>(r) * cols;
      for (int c = 0; c < cols; ++c) din[static_cast<std::size_t>(c)] += g * row[c];
    }
  }
}

void Dense::zero() noexcept {
  std::fill(w.begin(), w.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
}

Mlp::Mlp(std::vector<Dense> layers, bool relu_on_output)
    : layers_(std::move(layers)), relu_on_output_(relu_on_output) {
  require(!layers_.empty(), "Mlp: at least one layer is required");
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    require(layers_[i].cols == layers_[i - 1].rows, "Mlp: consecutive layer shapes are incompatible");
  }
}

Mlp Mlp::glorot(std::span<const int> widths, bool relu_on_output, Rng& rng) {
  require(widths.size() >= 2, "Mlp::glorot: need input and output widths");
  std::vector<Dense> layers;
  for (std::size_t i = 1; i < widths.size(); ++i) layers.push_back(Dense::glorot(widths[i], widths[i - 1], rng));
  return Mlp(std::move(layers), relu_on_output);
}

std::size_t Mlp::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.parameter_count();
  return n;
}

std::span<const double> Mlp::forward(std::span<const double> in, Tape& tape) const {
  require(in.size() == static_cast<std::size_t>(input_width()), "Mlp::forward: input width mismatch");
  tape.values.resize(layers_.size() + 1);
  tape.values[0].assign(in.begin(), in.end());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    auto& out = tape.values[i + 1];
    out.resize(static_cast<std::size_t>(layers_[i].rows));
    layers_[i].forward(tape.values[i], out);
    if (relu_on_output_ || i + 1 < layers_.size()) {
      for (double& v : out) v = v > 0.0 ? v : 0.0;
    }
  }
  return tape.values.back();
}

void Mlp::backward(const Tape& tape, std::span<const double> dout, Mlp& grad,
                   std::vector<double>* din) const {
  require(tape.values.size() == layers_.size() + 1, "Mlp::backward: tape does not match network");
  std::vector<double> upstream(dout.begin(), dout.end());
  std::vector<double> downstream;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const bool activated = relu_on_output_ || li + 1 < layers_.size();
    if (activated) {
      const auto& post = tape.values[li + 1];
      for (std::size_t j = 0; j < upstream.size(); ++j) {
        if (post[j] <= 0.0) upstream[j] = 0.0;
      }
    }
    const bool need_din = li > 0 || din != nullptr;
    downstream.assign(need_din ? static_cast<std::size_t>(layers_[li].cols) : 0, 0.0);
    layers_[li].backward(tape.values[li], upstream, grad.layers_[li], downstream);
    upstream.swap(downstream);
  }
  if (din != nullptr) *din = std::move(upstream);
}

Mlp Mlp::zeros_like() const {
  Mlp out = *this;
  out.zero();
  return out;
}

void Mlp::zero() noexcept {
  for (auto& l : layers_) l.zero();
}

void append_tensors(Dense& layer, std::vector<std::span<double>>& out) {
  out.emplace_back(layer.w);
  out.emplace_back(layer.b);
}

void append_tensors(Mlp& net, std::vector<std::span<double>>& out) {
  for (auto& l : net.layers()) append_tensors(l, out);
}

double global_norm(std::span<const std::span<double>> tensors) noexcept {
  double sq = 0.0;
  for (const auto& t : tensors) {
    for (double v : t) sq += v * v;
  }
  return std::sqrt(sq);
}

void scale(std::span<const std::span<double>> tensors, double factor) noexcept {
  for (const auto& t : tensors) {
    for (double& v : t) v *= factor;
  }
}

bool all_finite(std::span<const std::span<double>> tensors) noexcept {
  for (const auto& t : tensors) {
    for (double v : t) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void softmax_inplace(std::span<double> logits) noexcept {
  if (logits.empty()) return;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : logits) v /= total;
}

}  // namespace rexl::nn
