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

#include "rexl/core/curve.hpp"

#include <cmath>

#include "rexl/core/error.hpp"

namespace rexl {

void ScoreCurve::validate() const {
  require(fractions.size() == scores.size(), "ScoreCurve: fractions and scores differ in length");
  require(fractions.size() >= 2, "ScoreCurve: at least two points are required");
  require(fractions.front() == 0.0 && fractions.back() == 1.0,
          "ScoreCurve: fractions must start at 0 and end at 1");
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    require(fractions[i] > fractions[i - 1], "ScoreCurve: fractions must be strictly ascending");
  }
  for (double s : scores) require(std::isfinite(s), "ScoreCurve: non-finite score");
}

double auc(const ScoreCurve& curve) {
  curve.validate();
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double width = curve.fractions[i] - curve.fractions[i - 1];
    area += 0.5 * width * (curve.scores[i] + curve.scores[i - 1]);
  }
  return area;
}

}  // namespace rexl
