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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rexl/classifier/classifier.hpp"
#include "rexl/core/error.hpp"

namespace rexl {

inline constexpr std::string_view kSubprocessProtocol = "rexl-clf/1";

struct SubprocessOptions {
  std::vector<std::string> command;  // argv; command[0] is looked up on PATH
  std::chrono::milliseconds timeout{30000};
};

// Splits a shell-like command line on whitespace, honouring single and
// double quotes. No other shell syntax is interpreted.
std::vector<std::string> split_command_line(const std::string& line);

// A classifier living in a child process, spoken to over newline-delimited
// JSON on its stdin/stdout:
//
//   child  -> {"protocol":"rexl-clf/1","classes":C,"height":H,"width":W,"channels":Ch}
//   parent -> {"id":n,"pixels":"<base64 little-endian float32, row-major H*W*C>"}
//   child  -> {"id":n,"scores":[... C floats ...]}
//
// The handshake may also carry "kind":"softmax"|"multilabel" (default
// multilabel). One request is in flight at a time. Any timeout or protocol
// violation leaves the adapter unusable; later calls fail immediately.
class SubprocessClassifier final : public Classifier {
 public:
  // Spawns the child and completes the handshake. Throws TransportError.
  explicit SubprocessClassifier(SubprocessOptions options);
  ~SubprocessClassifier() override;

  SubprocessClassifier(const SubprocessClassifier&) = delete;
  SubprocessClassifier& operator=(const SubprocessClassifier&) = delete;

  ClassScores score(const ImageTensor& image) override;
  // Scores restricted to `class_filter`, in that order. The result is
  // reported as multilabel since a subset need not sum to one.
  ClassScores score(const ImageTensor& image, std::span<const int> class_filter);

  InputShape input_shape() const override { return shape_; }
  int num_classes() const override { return classes_; }
  bool thread_safe() const override { return false; }

  bool usable() const noexcept { return !broken_; }

 private:
  ClassScores request(const ImageTensor& image);
  std::string read_line(std::chrono::steady_clock::time_point deadline);
  void write_all(const std::string& data, std::chrono::steady_clock::time_point deadline);
  [[noreturn]] void fail(TransportError::Kind kind, const std::string& message);
  std::string exit_description();
  void terminate_child() noexcept;

  SubprocessOptions options_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
  bool broken_ = false;
  InputShape shape_{};
  int classes_ = 0;
  ScoreKind kind_ = ScoreKind::kMultilabel;
};

// Scores through the given adapter, optionally restricted to some classes.
ClassScores subprocess_score(SubprocessClassifier& adapter, const ImageTensor& image,
                             std::optional<std::span<const int>> class_filter = std::nullopt);

// A fixed set of child processes. Each score() call checks out an idle child,
// so concurrent callers never share a pipe.
class SubprocessPool final : public Classifier {
 public:
  SubprocessPool(const SubprocessOptions& options, int size);

  ClassScores score(const ImageTensor& image) override;
  InputShape input_shape() const override { return workers_.front()->input_shape(); }
  int num_classes() const override { return workers_.front()->num_classes(); }
  bool thread_safe() const override { return true; }

  std::size_t size() const noexcept { return workers_.size(); }

 private:
  std::vector<std::unique_ptr<SubprocessClassifier>> workers_;
  std::vector<std::size_t> idle_;
  std::mutex mutex_;
  std::condition_variable available_;
};

}  // namespace rexl
