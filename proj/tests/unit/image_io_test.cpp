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

#include <fstream>

#include "fixtures.hpp"
#include "rexl/core/image_io.hpp"

namespace rexl {
namespace {

using testing::TempDir;

TEST(Png, GrayRoundTripAtEightBitLevels) {
  TempDir dir("png");
  ImageTensor img(5, 7, 1);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) img.at(y, x, 0) = static_cast<float>((y * 7 + x) * 7) / 255.0f;
  }
  write_png(dir / "g.png", img);
  const auto back = read_png(dir / "g.png");
  ASSERT_EQ(back.shape(), img.shape());
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-6);
}

TEST(Png, RgbRoundTripAndTextChunks) {
  TempDir dir("png");
  const auto img = testing::random_image(9, 4, 3, 3);
  write_png(dir / "c.png", img, {{"config_hash", "abc"}, {"seed", "7"}});
  const auto back = read_png(dir / "c.png");
  ASSERT_EQ(back.channels(), 3);
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 0.5 / 255.0 + 1e-6);
  const auto bytes = testing::read_text(dir / "c.png");
  EXPECT_NE(bytes.find("tEXtconfig_hash"), std::string::npos);
  EXPECT_NE(bytes.find("abc"), std::string::npos);
}

TEST(Png, CustomValueRange) {
  TempDir dir("png");
  const ValueRange range{-1.0, 1.0};
  const auto img = testing::constant_image(3, 3, 1, 1.0f, range);
  write_png(dir / "r.png", img);
  const auto back = read_png(dir / "r.png", range);
  EXPECT_EQ(back.range(), range);
  EXPECT_FLOAT_EQ(back.at(1, 1, 0), 1.0f);
}

TEST(Png, CorruptFileIsFormatError) {
  TempDir dir("png");
  std::ofstream(dir / "bad.png") << "\x89PNG\r\n\x1a\nthis is not a png";
  EXPECT_THROW(read_png(dir / "bad.png"), FormatError);
  EXPECT_THROW(read_png(dir / "missing.png"), Error);
}

TEST(Pgm, BinaryAndAsciiRead) {
  TempDir dir("pgm");
  {
    std::ofstream out(dir / "a.pgm");
    out << "P2\n# comment\n3 2\n255\n0 128 255\n255 128 0\n";
  }
  const auto a = read_pgm(dir / "a.pgm");
  ASSERT_EQ(a.height(), 2);
  ASSERT_EQ(a.width(), 3);
  EXPECT_FLOAT_EQ(a.at(0, 2, 0), 1.0f);
  EXPECT_NEAR(a.at(1, 1, 0), 128.0 / 255.0, 1e-6);

  write_pgm(dir / "b.pgm", a);
  const auto b = read_image(dir / "b.pgm");
  EXPECT_EQ(b, a);
}

TEST(Pgm, RejectsMaxvalAbove255) {
  TempDir dir("pgm");
  std::ofstream(dir / "x.pgm") << "P2\n1 1\n65535\n3\n";
  EXPECT_THROW(read_pgm(dir / "x.pgm"), FormatError);
}

TEST(ImageIo, UnknownExtensionRejected) {
  EXPECT_THROW(read_image("picture.bmp"), Error);
}

TEST(Quantize, EndpointsAndRounding) {
  const ValueRange r{0.0, 1.0};
  EXPECT_EQ(quantize(0.0, r), 0);
  EXPECT_EQ(quantize(1.0, r), 255);
  EXPECT_EQ(quantize(0.5, r), 128);
  EXPECT_EQ(quantize(2.0, r), 255);
}

}  // namespace
}  // namespace rexl
