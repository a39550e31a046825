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
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "rexl/core/curve.hpp"
#include "rexl/core/encoding.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/core/grid.hpp"
#include "rexl/core/parallel.hpp"
#include "rexl/core/rng.hpp"

namespace rexl {
namespace {

using testing::constant_image;
using testing::random_image;

TEST(Rng, SameSeedAndStreamRepeat) {
  Rng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
  Rng a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, UniformIntInclusiveBounds) {
  Rng rng(7);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const int v = rng.uniform_int(2, 6);
    ASSERT_GE(v, 2);
    ASSERT_LE(v, 6);
    ++seen[static_cast<std::size_t>(v - 2)];
  }
  for (int c : seen) EXPECT_GT(c, 300);
}

TEST(Rng, SaveAndLoadStateResumesSequence) {
  Rng a(9, 2);
  for (int i = 0; i < 10; ++i) a.next_u64();
  const auto state = a.save_state();
  Rng b(0);
  b.load_state(state);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UnitDoubleInHalfOpenInterval) {
  EXPECT_EQ(unit_double(0), 0.0);
  EXPECT_LT(unit_double(~0ULL), 1.0);
}

TEST(ImageTensor, RejectsOutOfRangeData) {
  EXPECT_THROW(ImageTensor(1, 2, 1, std::vector<float>{0.5f, 1.5f}), ContractError);
  EXPECT_THROW(ImageTensor(2, 2, 1, std::vector<float>{0.5f}), ContractError);
  EXPECT_NO_THROW(ImageTensor(1, 2, 1, std::vector<float>{0.0f, 1.0f}));
}

TEST(GridSpec, CellsTileTheImageExactly) {
  for (auto [h, w, k] : std::vector<std::tuple<int, int, int>>{{224, 224, 7}, {100, 37, 7}, {15, 9, 4}, {5, 5, 1}}) {
    GridSpec grid(k, h, w);
    std::vector<int> cover(static_cast<std::size_t>(h * w), 0);
    for (int c = 0; c < grid.cells(); ++c) {
      const auto r = grid.cell(c);
      for (int y = r.y0; y < r.y1; ++y) {
        for (int x = r.x0; x < r.x1; ++x) ++cover[static_cast<std::size_t>(y * w + x)];
      }
    }
    for (int v : cover) ASSERT_EQ(v, 1);
    EXPECT_EQ(grid.cell_at(h - 1, w - 1), grid.cells() - 1);
  }
}

TEST(GridSpec, LastRowAndColumnAbsorbRemainder) {
  GridSpec grid(7, 100, 37);
  EXPECT_EQ(grid.cell(0).height(), 14);
  EXPECT_EQ(grid.cell(6, 0).height(), 100 - 6 * 14);
  EXPECT_EQ(grid.cell(0).width(), 5);
  EXPECT_EQ(grid.cell(0, 6).width(), 37 - 6 * 5);
}

TEST(ApplyMask, EmptyMaskIsIdentity) {
  const auto img = random_image(28, 28, 3, 1);
  GridMask mask(GridSpec(7, 28, 28), 99);
  EXPECT_EQ(apply_mask(img, mask), img);
}

TEST(ApplyMask, OneCellChangesExactlyThatRectangle) {
  const auto img = random_image(224, 224, 1, 2);
  GridSpec grid(7, 224, 224);
  GridMask mask(grid, 5);
  mask.set(17);
  const auto out = apply_mask(img, mask);
  const auto rect = grid.cell(17);
  int differing = 0;
  for (int y = 0; y < 224; ++y) {
    for (int x = 0; x < 224; ++x) {
      if (out.at(y, x, 0) != img.at(y, x, 0)) {
        ++differing;
        EXPECT_TRUE(rect.contains(y, x));
      }
    }
  }
  EXPECT_EQ(differing, 32 * 32);
}

TEST(ApplyMask, DeterministicAndIdempotent) {
  const auto img = random_image(56, 56, 3, 3);
  GridMask mask(GridSpec(7, 56, 56), 11);
  for (int c : {0, 8, 30, 48}) mask.set(c);
  const auto once = apply_mask(img, mask);
  EXPECT_EQ(apply_mask(img, mask), once);
  EXPECT_EQ(apply_mask(once, mask), once);
}

TEST(ApplyMask, MaskedSetIsUnionOfOccupiedCells) {
  const auto img = constant_image(70, 70, 1, 0.5f);
  GridSpec grid(7, 70, 70);
  GridMask mask(grid, 4);
  for (int c : {3, 10, 11, 40}) mask.set(c);
  const auto out = apply_mask(img, mask);
  for (int y = 0; y < 70; ++y) {
    for (int x = 0; x < 70; ++x) {
      const bool masked = mask.occupied(grid.cell_at(y, x));
      if (!masked) {
        ASSERT_EQ(out.at(y, x, 0), 0.5f);
      }
    }
  }
}

TEST(ApplyMask, NoiseFollowsValueRange) {
  const ValueRange range{-1.0, 3.0};
  const auto img = constant_image(14, 14, 2, 0.0f, range);
  GridMask mask(GridSpec(7, 14, 14), 8);
  for (int c = 0; c < 49; ++c) mask.set(c);
  const auto out = apply_mask(img, mask);
  double lo = 10, hi = -10;
  for (float v : out.data()) {
    lo = std::min<double>(lo, v);
    hi = std::max<double>(hi, v);
  }
  EXPECT_GE(lo, -1.0);
  EXPECT_LE(hi, 3.0);
  EXPECT_LT(lo, 0.0);
  EXPECT_GT(hi, 2.0);
}

TEST(ApplyMask, MismatchedGridIsContractError) {
  const auto img = random_image(28, 28, 1, 1);
  GridMask mask(GridSpec(7, 14, 14), 1);
  EXPECT_THROW(apply_mask(img, mask), ContractError);
}

TEST(ApplyMask, DoesNotModifyInput) {
  const auto img = random_image(28, 28, 1, 6);
  const auto copy = img;
  GridMask mask(GridSpec(7, 28, 28), 1);
  mask.set(0);
  apply_mask(img, mask);
  EXPECT_EQ(img, copy);
}

TEST(BilinearUpsample, ConstantGridStaysConstant) {
  std::vector<double> grid(49, 0.5);
  for (double shift : {0.0, 5.3, -11.0}) {
    const auto f = bilinear_upsample(grid, 7, 112, 112, shift, -shift / 2);
    for (double v : f.values) ASSERT_DOUBLE_EQ(v, 0.5);
  }
}

TEST(BilinearUpsample, RowsAscendForIncreasingColumns) {
  const std::vector<double> grid{0, 1, 0, 1};
  const auto f = bilinear_upsample(grid, 2, 20, 20);
  for (int y = 0; y < 20; ++y) {
    for (int x = 1; x < 20; ++x) ASSERT_GE(f.at(y, x), f.at(y, x - 1));
  }
  EXPECT_LT(f.at(10, 0), f.at(10, 19));
}

TEST(BilinearUpsample, OutputWithinGridExtremes) {
  Rng rng(12);
  std::vector<double> grid(49);
  for (auto& g : grid) g = rng.uniform(-2.0, 5.0);
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  const auto f = bilinear_upsample(grid, 7, 224, 224, 13.0, -7.5);
  for (double v : f.values) {
    ASSERT_GE(v, *lo);
    ASSERT_LE(v, *hi);
  }
}

TEST(Auc, ConstantOneIsOne) {
  ScoreCurve c{{0.0, 0.25, 0.5, 1.0}, {1, 1, 1, 1}};
  EXPECT_DOUBLE_EQ(auc(c), 1.0);
}

TEST(Auc, LinearDescentIsHalf) {
  ScoreCurve c;
  for (int i = 0; i <= 10; ++i) {
    c.fractions.push_back(i / 10.0);
    c.scores.push_back(1.0 - i / 10.0);
  }
  EXPECT_NEAR(auc(c), 0.5, 1e-12);
}

TEST(Auc, HandTrapezoid) {
  ScoreCurve c{{0.0, 0.5, 1.0}, {1.0, 1.0, 0.0}};
  EXPECT_DOUBLE_EQ(auc(c), 0.75);
}

TEST(Auc, InvariantUnderCollinearInsertion) {
  ScoreCurve c{{0.0, 0.4, 1.0}, {0.9, 0.3, 0.1}};
  ScoreCurve d{{0.0, 0.2, 0.4, 0.7, 1.0}, {0.9, 0.6, 0.3, 0.2, 0.1}};
  EXPECT_NEAR(auc(c), auc(d), 1e-12);
}

TEST(Auc, RejectsFewerThanTwoPoints) {
  ScoreCurve c{{0.0}, {1.0}};
  EXPECT_THROW(auc(c), ContractError);
}

TEST(Auc, RejectsNonAscendingFractions) {
  ScoreCurve c{{0.0, 0.5, 0.5, 1.0}, {1, 1, 1, 1}};
  EXPECT_THROW(auc(c), ContractError);
}

TEST(GaussianBlur, ConstantImageUnchanged) {
  const auto img = constant_image(40, 30, 3, 0.3f);
  const auto out = gaussian_blur(img, 4.0);
  for (float v : out.data()) ASSERT_NEAR(v, 0.3f, 1e-6);
}

TEST(GaussianBlur, ImpulseCenterEqualsKernelCenterSquared) {
  ImageTensor img(41, 41, 1);
  img.at(20, 20, 0) = 1.0f;
  const auto out = gaussian_blur(img, 1.0);
  const auto kernel = gaussian_kernel(1.0);
  const double center = kernel[kernel.size() / 2];
  // Independent discrete Gaussian: taps exp(-x^2/2) over |x| <= 4, normalized.
  double norm = 0.0;
  for (int x = -4; x <= 4; ++x) norm += std::exp(-0.5 * x * x);
  EXPECT_NEAR(center, 1.0 / norm, 1e-12);
  EXPECT_NEAR(out.at(20, 20, 0), center * center, 1e-6);
  double mass = 0.0;
  for (float v : out.data()) mass += v;
  EXPECT_NEAR(mass, 1.0, 1e-5);
}

TEST(GaussianBlur, Sigma10PreservesChannelMeans) {
  const auto img = random_image(64, 48, 3, 21);
  const auto out = gaussian_blur(img, 10.0);
  for (int c = 0; c < 3; ++c) {
    double a = 0.0, b = 0.0;
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 48; ++x) {
        a += img.at(y, x, c);
        b += out.at(y, x, c);
      }
    }
    EXPECT_NEAR(b / a, 1.0, 1e-6);
  }
}

TEST(GaussianBlur, OutputStaysInRange) {
  const auto img = random_image(32, 32, 1, 5);
  const auto out = gaussian_blur(img, 2.5);
  for (float v : out.data()) {
    ASSERT_GE(v, 0.0f);
    ASSERT_LE(v, 1.0f);
  }
}

TEST(GaussianBlur, RejectsNonPositiveSigma) {
  const auto img = random_image(8, 8, 1, 5);
  EXPECT_THROW(gaussian_blur(img, 0.0), ContractError);
}

TEST(AveragePool, ScalesToUnitInterval) {
  const ValueRange range{0.0, 255.0};
  const auto img = constant_image(28, 28, 1, 127.5f, range);
  for (double v : average_pool(img, 7)) EXPECT_NEAR(v, 0.5, 1e-9);
}

TEST(Encoding, Base64KnownVectors) {
  const std::string text = "foobar";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(base64_encode(bytes), "Zm9vYmFy");
  EXPECT_EQ(base64_encode(std::span(bytes).first(4)), "Zm9vYg==");
  EXPECT_EQ(base64_decode("Zm9vYg=="), std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 4));
  EXPECT_THROW(base64_decode("Zm9*"), FormatError);
}

TEST(Encoding, FloatsRoundTrip) {
  const std::vector<float> v{0.0f, -1.5f, 3.25e-7f, 1.0f};
  EXPECT_EQ(decode_floats_base64(encode_floats_base64(v)), v);
  // 1.0f little-endian is 00 00 80 3f.
  EXPECT_EQ(encode_floats_base64(std::vector<float>{1.0f}), "AACAPw==");
}

TEST(Encoding, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash_hex("a"), "af63dc4c8601ec8c");
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace rexl
