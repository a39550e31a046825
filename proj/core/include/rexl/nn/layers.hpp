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

#include "rexl/core/rng.hpp"

namespace rexl::nn {

// Affine layer y = W x + b with W stored row-major as rows x cols.
struct Dense {
  int rows = 0;  // output width
  int cols = 0;  // input width
  std::vector<double> w;
  std::vector<double> b;

  Dense() = default;
  Dense(int rows, int cols);

  // Uniform in +-sqrt(6 / (fan_in + fan_out)), zero bias.
  static Dense glorot(int rows, int cols, Rng& rng);

  std::size_t parameter_count() const noexcept { return w.size() + b.size(); }

  void forward(std::span<const double> in, std::span<double> out) const;
  // Accumulates dL/dW and dL/db into `grad`; writes dL/din when `din` is
  // non-empty.
  void backward(std::span<const double> in, std::span<const double> dout, Dense& grad,
                std::span<double> din) const;

  void zero() noexcept;
  friend bool operator==(const Dense&, const Dense&) = default;
};

// Stack of dense layers with a rectifier after every hidden layer, and after
// the last one too when `relu_on_output` is set.
class Mlp {
 public:
  struct Tape {
    // values[0] is the input; values[i + 1] is the activated output of layer i.
    std::vector<std::vector<double>> values;
  };

  Mlp() = default;
  Mlp(std::vector<Dense> layers, bool relu_on_output);

  // widths = {input, hidden..., output}.
  static Mlp glorot(std::span<const int> widths, bool relu_on_output, Rng& rng);

  int input_width() const noexcept { return layers_.empty() ? 0 : layers_.front().cols; }
  int output_width() const noexcept { return layers_.empty() ? 0 : layers_.back().rows; }
  bool relu_on_output() const noexcept { return relu_on_output_; }
  const std::vector<Dense>& layers() const noexcept { return layers_; }
  std::vector<Dense>& layers() noexcept { return layers_; }
  std::size_t parameter_count() const noexcept;

  std::span<const double> forward(std::span<const double> in, Tape& tape) const;
  void backward(const Tape& tape, std::span<const double> dout, Mlp& grad,
                std::vector<double>* din = nullptr) const;

  // Same shapes, all zeros.
  Mlp zeros_like() const;
  void zero() noexcept;

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::vector<Dense> layers_;
  bool relu_on_output_ = false;
};

void append_tensors(Dense& layer, std::vector<std::span<double>>& out);
void append_tensors(Mlp& net, std::vector<std::span<double>>& out);

double global_norm(std::span<const std::span<double>> tensors) noexcept;
void scale(std::span<const std::span<double>> tensors, double factor) noexcept;
bool all_finite(std::span<const std::span<double>> tensors) noexcept;

// Numerically stable softmax; output written in place of the logits.
void softmax_inplace(std::span<double> logits) noexcept;

}  // namespace rexl::nn
