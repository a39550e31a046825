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

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/classifier/planted_oracle.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/image.hpp"
#include "rexl/core/rng.hpp"

namespace rexl::testing {

ImageTensor random_image(int height, int width, int channels, std::uint64_t seed, ValueRange range = {});
ImageTensor constant_image(int height, int width, int channels, float value, ValueRange range = {});
// 0/1 checkerboard with the given square size.
ImageTensor checkerboard(int height, int width, int square);

// Oracle over `reference` with the given (cell, weight) pairs.
PlantedOracleConfig oracle_config(ImageTensor reference, std::vector<SalientCell> salient,
                                  Combine combine = Combine::kLinear, int k = 7, double tolerance = 0.25);

// Argument vector that runs the stub classifier in `mode`.
std::vector<std::string> stub_command(const std::string& mode, const std::vector<std::string>& extra = {});
std::string stub_command_line(const std::string& mode, const std::vector<std::string>& extra = {});

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& path);

// Wraps a classifier and throws TransportError on the listed call numbers
// (1-based, counted across the lifetime of the object).
class FlakyClassifier final : public Classifier {
 public:
  FlakyClassifier(Classifier& inner, std::vector<std::uint64_t> failing_calls)
      : inner_(inner), failing_(std::move(failing_calls)) {}

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return inner_.input_shape(); }
  int num_classes() const override { return inner_.num_classes(); }
  bool thread_safe() const override { return false; }

 private:
  Classifier& inner_;
  std::vector<std::uint64_t> failing_;
  std::uint64_t calls_ = 0;
};

// Sample correlation coefficient.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rexl::testing
