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

namespace rexl::nn {

// RMSProp: s <- alpha s + (1 - alpha) g^2;  p <- p - lr g / (sqrt(s) + eps).
class RmsProp {
 public:
  RmsProp() = default;
  RmsProp(double learning_rate, double alpha, double epsilon);

  void step(std::span<const std::span<double>> params, std::span<const std::span<double>> grads);

  double learning_rate() const noexcept { return lr_; }
  const std::vector<double>& square_average() const noexcept { return square_avg_; }
  void set_square_average(std::vector<double> state) { square_avg_ = std::move(state); }

 private:
  double lr_ = 1e-4;
  double alpha_ = 0.9;
  double eps_ = 1e-5;
  std::vector<double> square_avg_;
};

class Adam {
 public:
  Adam() = default;
  Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

  void step(std::span<const std::span<double>> params, std::span<const std::span<double>> grads);

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long long t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace rexl::nn
