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

#include "rexl/nn/optim.hpp"

#include <cmath>

#include "rexl/core/error.hpp"

namespace rexl::nn {

namespace {

std::size_t total_size(std::span<const std::span<double>> tensors) {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

}  // namespace

RmsProp::RmsProp(double learning_rate, double alpha, double epsilon)
    : lr_(learning_rate), alpha_(alpha), eps_(epsilon) {
  require(learning_rate > 0.0, "RmsProp: learning rate must be > 0");
  require(alpha >= 0.0 && alpha < 1.0, "RmsProp: alpha must be in [0, 1)");
}

void RmsProp::step(std::span<const std::span<double>> params, std::span<const std::span<double>> grads) {
  require(params.size() == grads.size(), "RmsProp::step: parameter/gradient count mismatch");
  const std::size_t n = total_size(params);
  if (square_avg_.empty()) square_avg_.assign(n, 0.0);
  require(square_avg_.size() == n, "RmsProp::step: optimizer state does not match parameters");
  std::size_t k = 0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    require(params[t].size() == grads[t].size(), "RmsProp::step: tensor shape mismatch");
    for (std::size_t i = 0; i < params[t].size(); ++i, ++k) {
      const double g = grads[t][i];
      double& s = square_avg_[k];
      s = alpha_ * s + (1.0 - alpha_) * g * g;
      params[t][i] -= lr_ * g / (std::sqrt(s) + eps_);
    }
  }
}

Adam::Adam(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  require(learning_rate > 0.0, "Adam: learning rate must be > 0");
}

void Adam::step(std::span<const std::span<double>> params, std::span<const std::span<double>> grads) {
  require(params.size() == grads.size(), "Adam::step: parameter/gradient count mismatch");
  const std::size_t n = total_size(params);
  if (m_.empty()) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  }
  require(m_.size() == n, "Adam::step: optimizer state does not match parameters");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::size_t k = 0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i, ++k) {
      const double g = grads[t][i];
      m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g;
      v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g * g;
      params[t][i] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + eps_);
    }
  }
}

}  // namespace rexl::nn
