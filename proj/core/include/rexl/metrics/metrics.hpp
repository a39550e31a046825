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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/curve.hpp"
#include "rexl/core/image.hpp"
#include "rexl/saliency/saliency.hpp"

namespace rexl {

enum class DeletionFill { kNoise, kMidpoint };

std::string_view to_string(DeletionFill fill) noexcept;
DeletionFill parse_fill(std::string_view text);

struct EvalConfig {
  int cells_per_step = 1;
  double blur_sigma = 10.0;
  DeletionFill fill = DeletionFill::kNoise;
  std::uint64_t seed = 0;

  void validate() const;
};

// Cells removed in descending map order (ties to the lower index). The curve
// starts at (0, p(0)) and ends at (1, score of the fully masked image);
// fractions count masked cells.
ScoreCurve deletion_curve(Classifier& classifier, const ImageTensor& image, int target_class,
                          const SaliencyMap& map, const EvalConfig& config);

// Starts from gaussian_blur(image, sigma) and copies sharp cells back in the
// same order. The last point is scored on the bit-identical sharp image.
ScoreCurve insertion_curve(Classifier& classifier, const ImageTensor& image, int target_class,
                           const SaliencyMap& map, const EvalConfig& config);

struct ImageEval {
  std::string image_id;
  std::string method;
  double deletion_auc = 0.0;
  double insertion_auc = 0.0;
  std::uint64_t calls = 0;  // classifier calls made by the explainer
  double seconds = 0.0;     // explainer wall-clock
};

struct EvalReport {
  std::vector<ImageEval> items;

  struct Summary {
    std::size_t images = 0;
    double deletion_auc = 0.0;
    double insertion_auc = 0.0;
    double calls = 0.0;
    double seconds = 0.0;
  };
  // Per-method means; methods with no items are absent.
  std::map<std::string, Summary> summary() const;
};

// Machine description written into every timing report.
struct RunEnvironment {
  std::string cpu;
  int hardware_threads = 0;
  int threads = 1;
  std::string compiler;
};
RunEnvironment describe_environment(int threads);

// A saliency method under test, run against the shared classifier.
struct MethodHandle {
  std::string name;
  std::function<void(Classifier& classifier, const ImageTensor& image, int target_class)> run;
};

struct BenchmarkEntry {
  std::string method;
  std::size_t runs = 0;
  double mean_seconds = 0.0;
  double mean_calls = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkEntry> methods;
  RunEnvironment environment;
};

struct LabeledImage {
  const ImageTensor* image = nullptr;
  int target_class = 0;
};

// Times each method around its run() call only; calls come from the
// instrumented classifier all methods share.
BenchmarkReport benchmark(std::span<const MethodHandle> methods, InstrumentedClassifier& classifier,
                          std::span<const LabeledImage> images, int repetitions, int threads = 1);

std::string curve_to_csv(const ScoreCurve& curve, const std::map<std::string, std::string>& header = {});
void write_curve_csv(const std::filesystem::path& path, const ScoreCurve& curve,
                     const std::map<std::string, std::string>& header = {});

}  // namespace rexl
