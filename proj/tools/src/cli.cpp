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

#include "rexl/cli/cli.hpp"

#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "rexl/core/error.hpp"

namespace rexl::cli {

namespace {

enum class FlagKind { kValue, kList, kSwitch, kClassifier, kData };

struct FlagSpec {
  std::string name;
  std::string key;
  FlagKind kind;
  std::string help;
};

using CommandFn = void (*)(json, std::ostream&);

struct CommandSpec {
  std::string name;
  std::string help;
  CommandFn run;
  std::vector<FlagSpec> flags;
};

const FlagSpec kDataFlag{"--data", "data", FlagKind::kData, "dataset directory, or 'planted'"};
const FlagSpec kClassifierFlag{"--classifier", "classifier", FlagKind::kClassifier,
                               "tiny:WEIGHTS, subprocess:COMMAND or planted"};
const FlagSpec kAgentFlag{"--agent", "agent", FlagKind::kValue, "agent weight file"};
const FlagSpec kClassFlag{"--class", "class", FlagKind::kValue, "class to explain"};
const FlagSpec kLimitFlag{"--limit", "data.limit", FlagKind::kValue, "use only the first N images"};

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> specs{
      {"synth-data",
       "generate the synthetic shapes dataset",
       &cmd_synth_data,
       {{"--classes", "dataset.classes", FlagKind::kValue, "number of shape classes"},
        {"--per-class", "dataset.images_per_class", FlagKind::kValue, "images per class"},
        {"--size", "dataset.size", FlagKind::kValue, "image side in pixels"}}},
      {"train-classifier",
       "train the small base classifier on a shapes dataset",
       &cmd_train_classifier,
       {kDataFlag, {"--epochs", "model.epochs", FlagKind::kValue, "training epochs"}}},
      {"train",
       "train an explainer agent",
       &cmd_train,
       {kDataFlag,
        kClassifierFlag,
        {"--scope", "agent.scope", FlagKind::kValue, "dataset, class or image"},
        {"--class-id", "agent.class_id", FlagKind::kValue, "class for class and image scopes"},
        {"--image", "agent.image", FlagKind::kValue, "dataset file name for the image scope"},
        {"--steps", "train.total_steps", FlagKind::kValue, "environment steps"},
        {"--hidden", "train.hidden", FlagKind::kList, "hidden widths, e.g. 256,128"},
        {"--max-updates", "max_updates", FlagKind::kValue, "stop after N updates and checkpoint"},
        {"--resume", "resume", FlagKind::kSwitch, "continue from the checkpoint in --out"}}},
      {"explain",
       "write saliency maps and heatmaps",
       &cmd_explain,
       {kDataFlag, kClassifierFlag, kAgentFlag, kClassFlag, kLimitFlag,
        {"--lambda", "lambda", FlagKind::kValue, "cumulating factor"}}},
      {"evaluate",
       "deletion and insertion scores of the agent's maps",
       &cmd_evaluate,
       {kDataFlag, kClassifierFlag, kAgentFlag, kClassFlag, kLimitFlag,
        {"--lambdas", "lambdas", FlagKind::kList, "comma-separated cumulating factors"}}},
      {"compare",
       "compare rexl, rise, greedy and random saliency",
       &cmd_compare,
       {kDataFlag, kClassifierFlag, kAgentFlag, kClassFlag, kLimitFlag,
        {"--methods", "methods", FlagKind::kList, "comma-separated methods"},
        {"--masks", "rise.masks", FlagKind::kValue, "RISE mask count"}}},
      {"bench",
       "time each method and count classifier calls",
       &cmd_bench,
       {kDataFlag, kClassifierFlag, kAgentFlag, kClassFlag, kLimitFlag,
        {"--methods", "methods", FlagKind::kList, "comma-separated methods"},
        {"--masks", "rise.masks", FlagKind::kValue, "RISE mask count"},
        {"--latency-ms", "latency_ms", FlagKind::kValue, "minimum cost of one classifier call"},
        {"--repetitions", "repetitions", FlagKind::kValue, "runs per image and method"}}},
  };
  return specs;
}

json list_value(const std::string& text) {
  json out = json::array();
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(parse_value(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void apply_flag(json& config, const FlagSpec& flag, const std::string& text) {
  switch (flag.kind) {
    case FlagKind::kValue:
      set_path(config, flag.key, parse_value(text));
      return;
    case FlagKind::kList:
      set_path(config, flag.key, list_value(text));
      return;
    case FlagKind::kSwitch:
      set_path(config, flag.key, true);
      return;
    case FlagKind::kData:
      if (text == "planted") {
        set_path(config, "data.type", "planted");
      } else {
        set_path(config, "data.type", "shapes");
        set_path(config, "data.dir", text);
      }
      return;
    case FlagKind::kClassifier:
      if (text == "planted") {
        set_path(config, "classifier.type", "planted");
      } else if (text.rfind("tiny:", 0) == 0) {
        set_path(config, "classifier.type", "tiny");
        set_path(config, "classifier.weights", text.substr(5));
      } else if (text.rfind("subprocess:", 0) == 0) {
        set_path(config, "classifier.type", "subprocess");
        set_path(config, "classifier.command", text.substr(11));
      } else {
        throw ConfigError("--classifier expects tiny:PATH, subprocess:COMMAND or planted");
      }
      return;
  }
}

struct Pending {
  std::string config_path;
  // Applied after the config file: common flags, --set, then command flags.
  std::vector<std::function<void(json&)>> overrides;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rexl: black-box saliency maps from a learned deletion policy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rexl 0.1.0");

  Pending pending;
  std::map<CLI::App*, const CommandSpec*> by_app;
  for (const auto& spec : commands()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    by_app[sub] = &spec;
    sub->add_option("--config", pending.config_path, "JSON config file");
    sub->add_option_function<std::string>(
        "--seed", [&](const std::string& v) { pending.overrides.push_back([v](json& c) { set_path(c, "seed", parse_value(v)); }); },
        "global seed");
    sub->add_option_function<std::string>(
        "--threads",
        [&](const std::string& v) { pending.overrides.push_back([v](json& c) { set_path(c, "threads", parse_value(v)); }); },
        "worker threads (0: all cores)");
    sub->add_option_function<std::string>(
        "--out", [&](const std::string& v) { pending.overrides.push_back([v](json& c) { set_path(c, "out", v); }); },
        "output directory");
    sub->add_option_function<std::vector<std::string>>(
           "--set",
           [&](const std::vector<std::string>& items) {
             for (const auto& item : items) {
               pending.overrides.push_back([item](json& c) {
                 const auto eq = item.find('=');
                 if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + item + "'");
                 set_path(c, item.substr(0, eq), parse_value(item.substr(eq + 1)));
               });
             }
           },
           "override any config key, e.g. train.learning_rate=1e-3")
        ->take_all()
        ->allow_extra_args(false);
    for (const auto& flag : spec.flags) {
      if (flag.kind == FlagKind::kSwitch) {
        sub->add_flag_callback(
            flag.name, [&pending, &flag] { pending.overrides.push_back([&flag](json& c) { apply_flag(c, flag, ""); }); },
            flag.help);
      } else {
        sub->add_option_function<std::string>(
            flag.name,
            [&pending, &flag](const std::string& v) {
              pending.overrides.push_back([&flag, v](json& c) { apply_flag(c, flag, v); });
            },
            flag.help);
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const CommandSpec* command = nullptr;
  for (auto* sub : app.get_subcommands()) command = by_app.at(sub);

  try {
    json config = default_config(command->name);
    if (!pending.config_path.empty()) merge_config(config, load_config_file(pending.config_path));
    for (const auto& apply : pending.overrides) apply(config);
    command->run(std::move(config), out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TransportError& e) {
    err << "classifier transport error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitTransport;
  } catch (const TrainingError& e) {
    err << "training failed: " << e.what() << "\n";
    return kExitTraining;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rexl::cli
