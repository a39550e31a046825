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

#include <cmath>

#include "fixtures.hpp"
#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/classifier/subprocess.hpp"
#include "rexl/classifier/tiny_net.hpp"
#include "rexl/core/grid.hpp"
#include "rexl/core/parallel.hpp"
#include "rexl/data/synthetic.hpp"

namespace rexl {
namespace {

using testing::oracle_config;

ImageTensor noise_cells(const ImageTensor& image, std::initializer_list<int> cells, std::uint64_t seed = 3) {
  GridMask mask(GridSpec(7, image.height(), image.width()), seed);
  for (int c : cells) mask.set(c);
  return apply_mask(image, mask);
}

// Reference at 0.9: uniform noise deviates by 0.41 on average, beyond d0.
ImageTensor bright_reference() { return testing::constant_image(112, 112, 1, 0.9f); }

TEST(ClassScores, Validation) {
  EXPECT_NO_THROW((ClassScores{{0.2, 0.8}, ScoreKind::kSoftmax}.validate()));
  EXPECT_THROW((ClassScores{{0.2, 0.7}, ScoreKind::kSoftmax}.validate()), ContractError);
  EXPECT_NO_THROW((ClassScores{{0.2, 0.7}, ScoreKind::kMultilabel}.validate()));
  EXPECT_THROW((ClassScores{{1.7}, ScoreKind::kMultilabel}.validate()), ContractError);
  EXPECT_THROW((ClassScores{{}, ScoreKind::kMultilabel}.validate()), ContractError);
}

TEST(PlantedOracle, ReferenceScoresOne) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 0.6}, {20, 0.4}}));
  EXPECT_EQ(oracle.score(bright_reference())[0], 1.0);
}

TEST(PlantedOracle, LinearDropsByTheNoisedWeight) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 0.6}, {20, 0.4}}));
  EXPECT_NEAR(oracle.score(noise_cells(bright_reference(), {3}))[0], 0.4, 1e-12);
  EXPECT_NEAR(oracle.score(noise_cells(bright_reference(), {20}))[0], 0.6, 1e-12);
  EXPECT_NEAR(oracle.score(noise_cells(bright_reference(), {3, 20}))[0], 0.0, 1e-12);
}

TEST(PlantedOracle, MultiplicativeZeroWhenAnySalientCellNoised) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 0.5}, {20, 0.3}, {44, 0.2}}, Combine::kMultiplicative));
  EXPECT_EQ(oracle.score(bright_reference())[0], 1.0);
  for (int c : {3, 20, 44}) EXPECT_EQ(oracle.score(noise_cells(bright_reference(), {c}))[0], 0.0);
  EXPECT_EQ(oracle.score(noise_cells(bright_reference(), {0, 1}))[0], 1.0);
}

TEST(PlantedOracle, IntactnessClampAndLinearity) {
  auto cfg = oracle_config(testing::constant_image(70, 70, 1, 0.5f), {{0, 1.0}}, Combine::kLinear, 7, 0.2);
  EXPECT_EQ(oracle_intactness(cfg, cfg.reference, 0), 1.0);
  auto shifted = cfg.reference;
  GridSpec grid(7, 70, 70);
  const auto rect = grid.cell(0);
  for (float delta : {0.2f, 0.1f}) {
    for (int y = rect.y0; y < rect.y1; ++y) {
      for (int x = rect.x0; x < rect.x1; ++x) shifted.at(y, x, 0) = 0.5f + delta;
    }
    const double mad = static_cast<double>(0.5f + delta) - 0.5;
    EXPECT_NEAR(oracle_intactness(cfg, shifted, 0), std::max(0.0, 1.0 - mad / 0.2), 1e-6);
  }
}

TEST(PlantedOracle, LinearityOverDisjointCellSets) {
  const auto ref = testing::random_image(112, 112, 1, 9);
  PlantedOracle oracle(oracle_config(ref, {{1, 0.25}, {9, 0.25}, {30, 0.3}, {48, 0.2}}, Combine::kLinear, 7, 0.6));
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    GridMask a(GridSpec(7, 112, 112), 77), b(GridSpec(7, 112, 112), 77), ab(GridSpec(7, 112, 112), 77);
    for (int c = 0; c < 49; ++c) {
      const int which = rng.uniform_int(0, 2);
      if (which == 1) {
        a.set(c);
        ab.set(c);
      } else if (which == 2) {
        b.set(c);
        ab.set(c);
      }
    }
    const double p0 = oracle.score(ref)[0];
    const double da = p0 - oracle.score(apply_mask(ref, a))[0];
    const double db = p0 - oracle.score(apply_mask(ref, b))[0];
    const double dab = p0 - oracle.score(apply_mask(ref, ab))[0];
    EXPECT_NEAR(dab, da + db, 1e-9);
  }
}

TEST(PlantedOracle, MultiplicativeEqualsProductOfIntactness) {
  const auto ref = testing::random_image(112, 112, 1, 2);
  auto cfg = oracle_config(ref, {{5, 0.5}, {6, 0.5}}, Combine::kMultiplicative, 7, 0.8);
  PlantedOracle oracle(cfg);
  const auto img = noise_cells(ref, {5, 6});
  EXPECT_NEAR(oracle.score(img)[0], oracle_intactness(cfg, img, 5) * oracle_intactness(cfg, img, 6), 1e-12);
}

TEST(PlantedOracle, ScoreDoesNotMutateImage) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 1.0}}));
  const auto img = noise_cells(bright_reference(), {3});
  const auto copy = img;
  oracle.score(img);
  EXPECT_EQ(img, copy);
}

TEST(PlantedOracle, InvalidConfigsRejected) {
  EXPECT_THROW(PlantedOracle(oracle_config(bright_reference(), {{3, 0.6}, {20, 0.3}})), ContractError);
  EXPECT_THROW(PlantedOracle(oracle_config(bright_reference(), {{3, 0.5}, {3, 0.5}})), ContractError);
  EXPECT_THROW(PlantedOracle(oracle_config(bright_reference(), {{49, 1.0}})), ContractError);
  EXPECT_THROW(PlantedOracle(oracle_config(bright_reference(), {{3, 1.0}}, Combine::kLinear, 7, 0.0)), ContractError);
}

TEST(PlantedOracle, ShapeMismatchIsContractError) {
  PlantedOracle oracle(oracle_config(bright_reference(), {{3, 1.0}}));
  EXPECT_THROW(oracle.score(testing::constant_image(56, 56, 1, 0.9f)), ContractError);
}

TEST(Instrumented, CountsCallsAndHonoursLatency) {
  ConstantClassifier inner({4, 4, 1}, {{0.3}, ScoreKind::kMultilabel});
  InstrumentedClassifier counter(inner, std::chrono::milliseconds(2));
  const auto img = testing::constant_image(4, 4, 1, 0.0f);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) EXPECT_EQ(counter.score(img)[0], 0.3);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(10));
  EXPECT_EQ(counter.calls(), 5u);
  counter.reset_calls();
  EXPECT_EQ(counter.calls(), 0u);
}

LabeledDataset separable_toy(int per_class) {
  LabeledDataset d;
  d.num_classes = 2;
  Rng rng(5);
  for (int i = 0; i < 2 * per_class; ++i) {
    const int label = i % 2;
    ImageTensor img(8, 8, 1);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        const bool left = x < 4;
        img.at(y, x, 0) = static_cast<float>((left == (label == 0) ? 0.8 : 0.2) + rng.uniform(-0.1, 0.1));
      }
    }
    d.images.push_back(img);
    d.labels.push_back(label);
  }
  return d;
}

TEST(TinyNet, SeparableToyReachesFullAccuracy) {
  TinyTrainConfig cfg;
  cfg.pool = 4;
  cfg.hidden = {8};
  cfg.epochs = 200;
  Rng rng(1);
  const auto data = separable_toy(20);
  const auto result = train_tiny_classifier(data, cfg, rng);
  EXPECT_EQ(result.accuracy, 1.0);
  TinyNetClassifier clf(result.params);
  EXPECT_EQ(classification_accuracy(clf, data), 1.0);
}

TEST(TinyNet, EmptyDatasetIsPreconditionError) {
  Rng rng(1);
  EXPECT_THROW(train_tiny_classifier(LabeledDataset{}, TinyTrainConfig{}, rng), ContractError);
}

TEST(TinyNet, UnreachableAccuracyIsTrainingFailure) {
  auto data = separable_toy(10);
  for (std::size_t i = 0; i < data.labels.size(); ++i) data.labels[i] = static_cast<int>((i / 2) % 2);
  TinyTrainConfig cfg;
  cfg.pool = 4;
  cfg.epochs = 3;
  cfg.required_accuracy = 1.0;
  Rng rng(1);
  EXPECT_THROW(train_tiny_classifier(data, cfg, rng), TrainingError);
}

TEST(TinyNet, ShapesDatasetAboveNinetyFivePercent) {
  SyntheticDatasetSpec spec;
  spec.images_per_class = 100;
  spec.seed = 3;
  const auto data = to_dataset(generate_shapes(spec), spec.classes);
  Rng rng(2);
  TinyTrainConfig cfg;
  const auto result = train_tiny_classifier(data, cfg, rng);
  EXPECT_GE(result.accuracy, 0.95);
  TinyNetClassifier clf(result.params);
  EXPECT_GE(classification_accuracy(clf, data), 0.95);
}

TEST(TinyNet, ConvolutionAndSigmoidHeadTrain) {
  TinyTrainConfig cfg;
  cfg.pool = 4;
  cfg.hidden = {8};
  cfg.epochs = 200;
  cfg.use_conv = true;
  cfg.conv_filters = 3;
  cfg.head = HeadKind::kSigmoid;
  Rng rng(4);
  const auto result = train_tiny_classifier(separable_toy(20), cfg, rng);
  EXPECT_EQ(result.accuracy, 1.0);
  ASSERT_TRUE(result.params.conv.has_value());
  TinyNetClassifier clf(result.params);
  EXPECT_EQ(clf.score(separable_toy(1).images[0]).kind, ScoreKind::kMultilabel);
}

TEST(TinyNet, JsonRoundTripIsLossless) {
  TinyTrainConfig cfg;
  cfg.pool = 4;
  cfg.epochs = 2;
  cfg.required_accuracy = 0.0;
  cfg.use_conv = true;
  Rng rng(1);
  const auto params = train_tiny_classifier(separable_toy(5), cfg, rng).params;
  const auto text = tiny_net_to_json(params);
  EXPECT_NE(text.find("\"format\":\"rexl-weights/1\""), std::string::npos);
  EXPECT_EQ(tiny_net_from_json(text), params);
  EXPECT_THROW(tiny_net_from_json(text.substr(0, text.size() / 2)), FormatError);
  auto wrong = text;
  wrong.replace(wrong.find("rexl-weights/1"), 14, "rexl-weights/9");
  EXPECT_THROW(tiny_net_from_json(wrong), VersionError);
}

TEST(SplitCommandLine, QuotesAndWhitespace) {
  EXPECT_EQ(split_command_line("a  'b c' \"d e\" f"), (std::vector<std::string>{"a", "b c", "d e", "f"}));
  EXPECT_TRUE(split_command_line("   ").empty());
}

SubprocessOptions stub(const std::string& mode, const std::vector<std::string>& extra = {},
                       std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) {
  return {testing::stub_command(mode, extra), timeout};
}

TEST(Subprocess, HandshakeAndFixedScoresVerbatim) {
  SubprocessClassifier clf(stub("fixed", {"--scores", "0.125,0.875"}));
  EXPECT_EQ(clf.num_classes(), 2);
  EXPECT_EQ(clf.input_shape(), (InputShape{28, 28, 1}));
  const auto img = testing::random_image(28, 28, 1, 1);
  const auto s = clf.score(img);
  EXPECT_EQ(s.scores, (std::vector<double>{0.125, 0.875}));
  EXPECT_EQ(s.kind, ScoreKind::kSoftmax);
  EXPECT_EQ(clf.score(img).scores, s.scores);
}

TEST(Subprocess, ClassFilterSelectsScores) {
  SubprocessClassifier clf(stub("fixed", {"--scores", "0.125,0.875"}));
  const std::vector<int> filter{1};
  const auto s = subprocess_score(clf, testing::random_image(28, 28, 1, 1), std::span<const int>(filter));
  EXPECT_EQ(s.scores, (std::vector<double>{0.875}));
  EXPECT_EQ(s.kind, ScoreKind::kMultilabel);
}

TEST(Subprocess, PixelsArriveIntact) {
  SubprocessClassifier clf(stub("mean", {"--height", "4", "--width", "4"}));
  const auto img = testing::constant_image(4, 4, 1, 0.375f);
  EXPECT_DOUBLE_EQ(clf.score(img)[0], 0.375);
}

TransportError::Kind failure_kind(const std::string& mode, const std::vector<std::string>& extra = {},
                                  std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) {
  try {
    SubprocessClassifier clf(stub(mode, extra, timeout));
    clf.score(testing::random_image(28, 28, 1, 1));
  } catch (const TransportError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no transport error for mode " << mode;
  return TransportError::Kind::kSpawn;
}

TEST(Subprocess, OutOfRangeScoreIsValidationError) {
  EXPECT_EQ(failure_kind("bad"), TransportError::Kind::kInvalidScores);
}

TEST(Subprocess, SleepPastTimeoutIsTimeout) {
  EXPECT_EQ(failure_kind("sleep", {"--sleep-ms", "2000"}, std::chrono::milliseconds(200)),
            TransportError::Kind::kTimeout);
}

TEST(Subprocess, FailuresAreDistinguishable) {
  EXPECT_EQ(failure_kind("exit"), TransportError::Kind::kProcessExit);
  EXPECT_EQ(failure_kind("malformed"), TransportError::Kind::kMalformed);
  EXPECT_EQ(failure_kind("wrong-id"), TransportError::Kind::kMalformed);
  EXPECT_EQ(failure_kind("no-handshake", {}, std::chrono::milliseconds(200)), TransportError::Kind::kTimeout);
}

TEST(Subprocess, MissingExecutableIsSpawnError) {
  try {
    SubprocessClassifier clf({{"/nonexistent/rexl-classifier"}, std::chrono::milliseconds(1000)});
    FAIL() << "spawned a missing executable";
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.kind() == TransportError::Kind::kSpawn || e.kind() == TransportError::Kind::kProcessExit);
  }
}

TEST(Subprocess, BrokenAdapterFailsFast) {
  SubprocessClassifier clf(stub("malformed"));
  const auto img = testing::random_image(28, 28, 1, 1);
  EXPECT_THROW(clf.score(img), TransportError);
  EXPECT_FALSE(clf.usable());
  EXPECT_THROW(clf.score(img), TransportError);
}

TEST(Subprocess, WrongImageShapeIsContractError) {
  SubprocessClassifier clf(stub("fixed"));
  EXPECT_THROW(clf.score(testing::random_image(8, 8, 1, 1)), ContractError);
  EXPECT_TRUE(clf.usable());
}

TEST(SubprocessPool, ConcurrentCallersGetConsistentScores) {
  SubprocessPool pool(stub("mean", {"--height", "4", "--width", "4"}), 3);
  EXPECT_TRUE(pool.thread_safe());
  std::vector<double> got(24);
  parallel_for(got.size(), 4, [&](std::size_t i) {
    got[i] = pool.score(testing::constant_image(4, 4, 1, static_cast<float>(i) / 32.0f))[0];
  });
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_DOUBLE_EQ(got[i], static_cast<double>(i) / 32.0);
}

}  // namespace
}  // namespace rexl
