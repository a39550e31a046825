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

#include <benchmark/benchmark.h>

#include <memory>

#include "rexl/agent/policy.hpp"
#include "rexl/baselines/baselines.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/data/synthetic.hpp"
#include "rexl/environment/environment.hpp"
#include "rexl/environment/policies.hpp"
#include "rexl/metrics/metrics.hpp"
#include "rexl/saliency/saliency.hpp"

namespace rexl {
namespace {

PlantedOracleConfig instance() {
  PlantedFamilySpec fam;
  fam.seed = 1;
  return planted_instance(fam, 0);
}

PolicyParams agent(int pool) {
  Rng rng(3);
  const std::vector<int> hidden{256, 128};
  auto params = init_policy(pool * pool, 49, hidden, rng, false);
  params.observation = {{112, 112, 1}, 7, pool, false, 1};
  return params;
}

void BM_Episode(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  Environment env(oracle, {});
  auto image = std::make_shared<const ImageTensor>(cfg.reference);
  RandomPolicy policy{Rng(2)};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(env, policy, image, 0, seed++));
  state.SetItemsProcessed(state.iterations() * 49);
}
BENCHMARK(BM_Episode);

void BM_Explain(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  const auto params = agent(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(explain(params, oracle, cfg.reference, 0, 1.0, seed++));
}
BENCHMARK(BM_Explain)->Arg(7)->Arg(28);

void BM_PolicyForward(benchmark::State& state) {
  const auto params = agent(28);
  Observation obs(28 * 28, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(policy_forward(params, obs));
}
BENCHMARK(BM_PolicyForward);

void BM_Rise(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  RiseConfig rc;
  rc.masks = static_cast<int>(state.range(0));
  rc.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(rise_saliency(oracle, cfg.reference, 0, rc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rise)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_saliency(oracle, cfg.reference, 0, 7, 49, 1.0, 0));
}
BENCHMARK(BM_Greedy)->Unit(benchmark::kMillisecond);

void BM_DeletionCurve(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  Rng rng(4);
  const auto map = random_saliency(7, rng);
  for (auto _ : state) benchmark::DoNotOptimize(deletion_curve(oracle, cfg.reference, 0, map, {}));
}
BENCHMARK(BM_DeletionCurve);

void BM_InsertionCurve(benchmark::State& state) {
  const auto cfg = instance();
  PlantedOracle oracle(cfg);
  Rng rng(4);
  const auto map = random_saliency(7, rng);
  for (auto _ : state) benchmark::DoNotOptimize(insertion_curve(oracle, cfg.reference, 0, map, {}));
}
BENCHMARK(BM_InsertionCurve);

void BM_GaussianBlur(benchmark::State& state) {
  const auto img = instance().reference;
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_GaussianBlur)->Arg(2)->Arg(10);

void BM_BilinearUpsample(benchmark::State& state) {
  std::vector<double> grid(49);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i % 2);
  for (auto _ : state) benchmark::DoNotOptimize(bilinear_upsample(grid, 7, 112, 112));
}
BENCHMARK(BM_BilinearUpsample);

void BM_AveragePool(benchmark::State& state) {
  const auto img = instance().reference;
  for (auto _ : state) benchmark::DoNotOptimize(average_pool(img, 28));
}
BENCHMARK(BM_AveragePool);

}  // namespace
}  // namespace rexl

BENCHMARK_MAIN();
