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

#include "rexl/core/error.hpp"

namespace rexl {

std::string_view to_string(TransportError::Kind kind) noexcept {
  switch (kind) {
    case TransportError::Kind::kTimeout:
      return "timeout";
    case TransportError::Kind::kMalformed:
      return "malformed";
    case TransportError::Kind::kInvalidScores:
      return "invalid_scores";
    case TransportError::Kind::kProcessExit:
      return "process_exit";
    case TransportError::Kind::kSpawn:
      return "spawn";
  }
  return "unknown";
}

}  // namespace rexl
