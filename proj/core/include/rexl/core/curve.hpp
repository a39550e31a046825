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

#include <vector>

namespace rexl {

// Score as a function of the fraction of the image perturbed.
struct ScoreCurve {
  std::vector<double> fractions;  // strictly ascending, 0 first, 1 last
  std::vector<double> scores;

  std::size_t size() const noexcept { return fractions.size(); }
  // Throws ContractError when the curve invariants do not hold.
  void validate() const;
};

// Trapezoidal area under the curve over [0, 1].
double auc(const ScoreCurve& curve);

}  // namespace rexl
