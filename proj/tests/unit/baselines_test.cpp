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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "rexl/baselines/baselines.hpp"
#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/environment/environment.hpp"
#include "rexl/metrics/metrics.hpp"
#include "rexl/saliency/saliency.hpp"

namespace rexl {
namespace {

using testing::oracle_config;

ImageTensor bright_reference() { return testing::constant_image(112, 112, 1, 0.9f); }

TEST(Rise, SingleAllKeepMaskIsScoreOverKeepProb) {
  const auto img = testing::random_image(28, 28, 1, 1);
  ConstantClassifier clf(img.shape(), {{0.3, 0.7}, ScoreKind::kSoftmax});
  const std::vector<RiseMask> masks{{std::vector<double>(49, 1.0), 0.0, 0.0}};
  const auto out = rise_from_masks(clf, img, 1, masks, 0.5);
  EXPECT_EQ(out.calls, 1u);
  for (double v : out.saliency.values) EXPECT_NEAR(v, 0.7 / 0.5, 1e-12);
}

TEST(Rise, CallCountEqualsMaskCount) {
  const auto img = testing::random_image(28, 28, 1, 1);
  ConstantClassifier clf(img.shape(), {{0.5}, ScoreKind::kMultilabel});
  InstrumentedClassifier counter(clf);
  RiseConfig cfg;
  cfg.masks = 137;
  const auto out = rise_saliency(counter, img, 0, cfg);
  EXPECT_EQ(out.calls, 137u);
  EXPECT_EQ(counter.calls(), 137u);
}

TEST(Rise, MasksArePureFunctionsOfSeedAndIndex) {
  RiseConfig cfg;
  cfg.seed = 4;
  const auto a = sample_rise_mask(cfg, 112, 112, 17);
  const auto b = sample_rise_mask(cfg, 112, 112, 17);
  EXPECT_EQ(a.grid, b.grid);
  EXPECT_EQ(a.shift_x, b.shift_x);
  EXPECT_NE(sample_rise_mask(cfg, 112, 112, 18).grid, a.grid);
  for (double v : a.grid) EXPECT_TRUE(v == 0.0 || v == 1.0);
  cfg.random_shift = false;
  const auto c = sample_rise_mask(cfg, 112, 112, 3);
  EXPECT_EQ(c.shift_x, 0.0);
  EXPECT_EQ(c.shift_y, 0.0);
}

TEST(Rise, CorrelatesWithPlantedWeights) {
  const std::vector<SalientCell> salient{{3, 0.4}, {17, 0.3}, {30, 0.2}, {44, 0.1}};
  PlantedOracle oracle(oracle_config(bright_reference(), salient));
  RiseConfig cfg;
  cfg.masks = 2000;
  cfg.random_shift = false;
  cfg.seed = 7;
  const auto out = rise_saliency(oracle, bright_reference(), 0, cfg);
  const auto pooled = pool_to_grid(out.saliency, 7);
  std::vector<double> planted(49, 0.0);
  for (const auto& s : salient) planted[static_cast<std::size_t>(s.cell)] = s.weight;
  // Bilinear masks spread each cell's credit into its neighbours.
  const auto footprint = pool_to_grid(bilinear_upsample(planted, 7, 112, 112), 7);
  EXPECT_GT(testing::pearson(pooled, footprint), 0.9);
  EXPECT_GT(testing::pearson(pooled, planted), 0.8);
  EXPECT_EQ(ranked_cells(pooled).front(), 3);
}

TEST(Rise, ThreadCountDoesNotChangeResult) {
  const auto ref = testing::random_image(56, 56, 1, 3);
  PlantedOracle oracle(oracle_config(ref, {{3, 0.5}, {20, 0.5}}, Combine::kLinear, 7, 0.6));
  RiseConfig cfg;
  cfg.masks = 300;
  cfg.threads = 1;
  const auto one = rise_saliency(oracle, ref, 0, cfg);
  cfg.threads = 4;
  const auto four = rise_saliency(oracle, ref, 0, cfg);
  EXPECT_EQ(one.saliency.values, four.saliency.values);
}

TEST(Rise, InvalidConfigRejected) {
  RiseConfig cfg;
  cfg.masks = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.masks = 10;
  cfg.keep_prob = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(PoolToGrid, CellMeans) {
  Field f(14, 14, 0.0);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) f.at(y, x) = 4.0;
  }
  f.at(13, 13) = 2.0;
  const auto g = pool_to_grid(f, 7);
  EXPECT_DOUBLE_EQ(g[0], 4.0);
  EXPECT_DOUBLE_EQ(g[48], 0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(Greedy, PicksPlantedCellsInWeightOrder) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{31, 0.25}, {2, 0.45}, {19, 0.3}}));
  const auto ex = greedy_saliency(oracle, bright_reference(), 0, 7, 3, 1.0, 1);
  ASSERT_EQ(ex.trace.size(), 3u);
  EXPECT_EQ(ex.trace.entries[0].cell, 2);
  EXPECT_EQ(ex.trace.entries[1].cell, 19);
  EXPECT_EQ(ex.trace.entries[2].cell, 31);
  EXPECT_EQ(ex.calls, 49u + 48u + 47u + 1u);
}

TEST(Greedy, FullBudgetCallCount) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{31, 1.0}}));
  InstrumentedClassifier counter(oracle);
  const auto ex = greedy_saliency(counter, bright_reference(), 0, 7, 49, 1.0, 1);
  EXPECT_EQ(ex.calls, 1226u);
  EXPECT_EQ(counter.calls(), 1226u);
  EXPECT_THROW(greedy_saliency(oracle, bright_reference(), 0, 7, 50, 1.0, 1), ContractError);
}

TEST(Greedy, AchievedDropDominatesAlternatives) {
  const auto ref = testing::random_image(112, 112, 1, 21);
  PlantedOracle oracle(oracle_config(ref, {{0, 0.1}, {9, 0.2}, {25, 0.3}, {40, 0.4}}, Combine::kLinear, 7, 0.6));
  const std::uint64_t seed = 5;
  const auto ex = greedy_saliency(oracle, ref, 0, 7, 6, 1.0, seed);
  Environment env(oracle, {});
  env.reset(ref, 0, seed);
  for (const auto& entry : ex.trace.entries) {
    for (int cell = 0; cell < 49; ++cell) {
      if (env.state().mask.occupied(cell)) continue;
      Environment alt = env;
      EXPECT_GE(entry.delta + 1e-12, alt.step(cell).delta) << "cell " << cell;
    }
    const auto taken = env.step(entry.cell);
    EXPECT_NEAR(taken.delta, entry.delta, 1e-12);
  }
}

TEST(RandomSaliency, StrictlyDecreasingPermutation) {
  Rng rng(2);
  const auto m = random_saliency(7, rng);
  EXPECT_NEAR(std::accumulate(m.weights.begin(), m.weights.end(), 0.0), 1.0, 1e-12);
  std::set<double> distinct(m.weights.begin(), m.weights.end());
  EXPECT_EQ(distinct.size(), 49u);
  auto sorted = m.weights;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 49; ++i) EXPECT_NEAR(sorted[static_cast<std::size_t>(i)], (i + 1) / 1225.0, 1e-12);
  Rng other(3);
  EXPECT_NE(random_saliency(7, other).weights, m.weights);
}

TEST(RandomSaliency, ExpectedDeletionAucMatchesClosedForm) {
  // Three equal planted cells: after j random deletions the expected score is
  // 1 - j/49, so the expected trapezoid area is exactly 1/2.
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 1.0 / 3}, {24, 1.0 / 3}, {45, 1.0 - 2.0 / 3}}));
  Rng rng(9);
  const int trials = 400;
  double total = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto map = random_saliency(7, rng);
    EvalConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    total += auc(deletion_curve(oracle, bright_reference(), 0, map, cfg));
  }
  EXPECT_NEAR(total / trials, 0.5, 0.01);
}

}  // namespace
}  // namespace rexl
