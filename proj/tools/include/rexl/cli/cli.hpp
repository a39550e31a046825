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

#include <iosfwd>
#include <string>
#include <vector>

#include "rexl/cli/config.hpp"

namespace rexl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitTransport = 3,
  kExitTraining = 4,
};

// Parses `args` (without the program name), runs the command and maps
// errors onto exit codes. Diagnostics go to `err`, progress to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Commands on an effective config (defaults, then file, then flags). Each
// writes its artifacts and effective_config.json under config["out"].
void cmd_synth_data(json config, std::ostream& log);
void cmd_train_classifier(json config, std::ostream& log);
void cmd_train(json config, std::ostream& log);
void cmd_explain(json config, std::ostream& log);
void cmd_evaluate(json config, std::ostream& log);
void cmd_compare(json config, std::ostream& log);
void cmd_bench(json config, std::ostream& log);

}  // namespace rexl::cli
