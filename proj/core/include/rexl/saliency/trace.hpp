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

#include <vector>

namespace rexl {

struct TraceEntry {
  int cell = 0;
  double delta = 0.0;  // p(t-1) - p(t)
  double score = 0.0;  // p(t)
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// Ordered record of one deletion rollout. Cells may repeat; re-masking an
// occupied cell is a pixel no-op and records delta = 0.
struct DeletionTrace {
  double initial_score = 0.0;  // p(0)
  std::vector<TraceEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  double final_score() const noexcept { return entries.empty() ? initial_score : entries.back().score; }
  friend bool operator==(const DeletionTrace&, const DeletionTrace&) = default;
};

}  // namespace rexl
