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

#include "rexl/metrics/metrics.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json_util.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/filters.hpp"
#include "rexl/core/grid.hpp"

namespace rexl {

std::string_view to_string(DeletionFill fill) noexcept {
  return fill == DeletionFill::kNoise ? "noise" : "midpoint";
}

DeletionFill parse_fill(std::string_view text) {
  if (text == "noise") return DeletionFill::kNoise;
  if (text == "midpoint") return DeletionFill::kMidpoint;
  throw ConfigError("unknown deletion fill \"" + std::string(text) + "\"");
}

void EvalConfig::validate() const {
  if (cells_per_step < 1) throw ConfigError("cells_per_step must be >= 1");
  if (!(blur_sigma > 0.0)) throw ConfigError("blur_sigma must be positive");
}

namespace {

double target_score(Classifier& classifier, const ImageTensor& image, int target_class) {
  return classifier.score(image).scores[static_cast<std::size_t>(target_class)];
}

void fill_midpoint(ImageTensor& image, const GridSpec& grid, int cell) {
  const CellRect r = grid.cell(cell);
  const auto mid = static_cast<float>(image.range().midpoint());
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      for (int c = 0; c < image.channels(); ++c) image.at(y, x, c) = mid;
    }
  }
}

template <typename Apply>
ScoreCurve run_curve(Classifier& classifier, ImageTensor current, int target_class, const SaliencyMap& map,
                     const EvalConfig& config, Apply apply) {
  config.validate();
  require(target_class >= 0 && target_class < classifier.num_classes(), "target class out of range");
  const GridSpec grid(map.k, current.height(), current.width());
  const auto order = ranked_cells(map.weights);
  const int cells = grid.cells();
  ScoreCurve curve;
  curve.fractions.push_back(0.0);
  curve.scores.push_back(target_score(classifier, current, target_class));
  int done = 0;
  while (done < cells) {
    const int next = std::min(cells, done + config.cells_per_step);
    for (; done < next; ++done) apply(current, grid, order[static_cast<std::size_t>(done)]);
    curve.fractions.push_back(done == cells ? 1.0 : static_cast<double>(done) / cells);
    curve.scores.push_back(target_score(classifier, current, target_class));
  }
  return curve;
}

}  // namespace

ScoreCurve deletion_curve(Classifier& classifier, const ImageTensor& image, int target_class,
                          const SaliencyMap& map, const EvalConfig& config) {
  const auto seed = config.seed;
  const auto fill = config.fill;
  return run_curve(classifier, image, target_class, map, config,
                   [seed, fill](ImageTensor& img, const GridSpec& grid, int cell) {
                     if (fill == DeletionFill::kNoise) {
                       fill_cell_with_noise(img, grid, cell, seed);
                     } else {
                       fill_midpoint(img, grid, cell);
                     }
                   });
}

ScoreCurve insertion_curve(Classifier& classifier, const ImageTensor& image, int target_class,
                           const SaliencyMap& map, const EvalConfig& config) {
  config.validate();
  return run_curve(classifier, gaussian_blur(image, config.blur_sigma), target_class, map, config,
                   [&image](ImageTensor& img, const GridSpec& grid, int cell) { copy_cell(img, image, grid, cell); });
}

std::map<std::string, EvalReport::Summary> EvalReport::summary() const {
  std::map<std::string, Summary> out;
  for (const auto& item : items) {
    auto& s = out[item.method];
    s.images += 1;
    s.deletion_auc += item.deletion_auc;
    s.insertion_auc += item.insertion_auc;
    s.calls += static_cast<double>(item.calls);
    s.seconds += item.seconds;
  }
  for (auto& [name, s] : out) {
    const double n = static_cast<double>(s.images);
    s.deletion_auc /= n;
    s.insertion_auc /= n;
    s.calls /= n;
    s.seconds /= n;
  }
  return out;
}

RunEnvironment describe_environment(int threads) {
  RunEnvironment env;
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) env.cpu = line.substr(colon + 2);
      break;
    }
  }
  if (env.cpu.empty()) env.cpu = "unknown";
  env.hardware_threads = static_cast<int>(std::thread::hardware_concurrency());
  env.threads = threads;
#if defined(__clang__)
  env.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  env.compiler = "gcc " __VERSION__;
#else
  env.compiler = "unknown";
#endif
  return env;
}

BenchmarkReport benchmark(std::span<const MethodHandle> methods, InstrumentedClassifier& classifier,
                          std::span<const LabeledImage> images, int repetitions, int threads) {
  require(repetitions >= 1, "benchmark: repetitions must be >= 1");
  BenchmarkReport report;
  report.environment = describe_environment(threads);
  for (const auto& method : methods) {
    BenchmarkEntry entry;
    entry.method = method.name;
    double seconds = 0.0;
    std::uint64_t calls = 0;
    for (int rep = 0; rep < repetitions; ++rep) {
      for (const auto& item : images) {
        classifier.reset_calls();
        const auto start = std::chrono::steady_clock::now();
        method.run(classifier, *item.image, item.target_class);
        const auto stop = std::chrono::steady_clock::now();
        seconds += std::chrono::duration<double>(stop - start).count();
        calls += classifier.calls();
        entry.runs += 1;
      }
    }
    if (entry.runs > 0) {
      entry.mean_seconds = seconds / static_cast<double>(entry.runs);
      entry.mean_calls = static_cast<double>(calls) / static_cast<double>(entry.runs);
    }
    report.methods.push_back(entry);
  }
  return report;
}

std::string curve_to_csv(const ScoreCurve& curve, const std::map<std::string, std::string>& header) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
  out << "fraction,score\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out << curve.fractions[i] << ',' << curve.scores[i] << '\n';
  return out.str();
}

void write_curve_csv(const std::filesystem::path& path, const ScoreCurve& curve,
                     const std::map<std::string, std::string>& header) {
  detail::write_text_file(path, curve_to_csv(curve, header));
}

}  // namespace rexl
