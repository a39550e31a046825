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

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rexl::testing {

ImageTensor random_image(int height, int width, int channels, std::uint64_t seed, ValueRange range) {
  ImageTensor img(height, width, channels, range);
  Rng rng(seed, 17);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform(range.lo, range.hi));
  img.clamp_to_range();
  return img;
}

ImageTensor constant_image(int height, int width, int channels, float value, ValueRange range) {
  ImageTensor img(height, width, channels, range);
  std::fill(img.data().begin(), img.data().end(), value);
  return img;
}

ImageTensor checkerboard(int height, int width, int square) {
  ImageTensor img(height, width, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) img.at(y, x, 0) = ((y / square + x / square) % 2) ? 1.0f : 0.0f;
  }
  return img;
}

PlantedOracleConfig oracle_config(ImageTensor reference, std::vector<SalientCell> salient, Combine combine, int k,
                                  double tolerance) {
  PlantedOracleConfig c;
  c.reference = std::move(reference);
  c.salient = std::move(salient);
  c.combine = combine;
  c.k = k;
  c.tolerance = tolerance;
  return c;
}

std::vector<std::string> stub_command(const std::string& mode, const std::vector<std::string>& extra) {
  std::vector<std::string> cmd{REXL_STUB_CLASSIFIER, mode};
  cmd.insert(cmd.end(), extra.begin(), extra.end());
  return cmd;
}

std::string stub_command_line(const std::string& mode, const std::vector<std::string>& extra) {
  std::string line;
  for (const auto& part : stub_command(mode, extra)) {
    if (!line.empty()) line += ' ';
    line += part;
  }
  return line;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  Rng rng(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
  path_ = base / ("rexl_" + tag + "_" + std::to_string(counter++) + "_" + std::to_string(rng.next_u64() % 1000000));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ClassScores FlakyClassifier::score(const ImageTensor& image) {
  ++calls_;
  if (std::find(failing_.begin(), failing_.end(), calls_) != failing_.end()) {
    throw TransportError(TransportError::Kind::kProcessExit, "injected failure");
  }
  return inner_.score(image);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace rexl::testing
