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

#ifdef REXL_HAVE_CLI

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "rexl/cli/cli.hpp"

namespace rexl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result rexl_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json read_json(const fs::path& path) { return json::parse(testing::read_text(path)); }

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

// One small shapes dataset and classifier shared by the tests below.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = std::make_unique<testing::TempDir>("cli");
    auto r = rexl_cli({"synth-data", "--out", data().string(), "--per-class", "12", "--size", "35", "--seed", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    r = rexl_cli({"train-classifier", "--data", data().string(), "--out", (*root_ / "clf").string(), "--epochs",
                  "40", "--set", "model.required_accuracy=0", "--set", "model.pool=7"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { root_.reset(); }

  static fs::path data() { return *root_ / "data"; }
  static std::string tiny() { return "tiny:" + (*root_ / "clf" / "classifier.json").string(); }
  static fs::path dir(const std::string& name) { return *root_ / name; }

  static std::vector<std::string> train_args(const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"train", "--data", data().string(), "--classifier", tiny(), "--out", out,
                                  "--steps", "196", "--hidden", "16", "--set", "agent.pool=7", "--set",
                                  "train.steps_per_update=98", "--seed", "3"};
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  }

  static std::unique_ptr<testing::TempDir> root_;
};

std::unique_ptr<testing::TempDir> CliTest::root_;

TEST_F(CliTest, SynthDataCountsAndLabels) {
  const auto r = rexl_cli({"synth-data", "--out", dir("synth").string(), "--size", "35", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files(dir("synth"), ".png"), 400u);
  const auto labels = testing::read_text(dir("synth") / "labels.csv");
  const bool header = labels.rfind("filename,class\n", 0) == 0;
  EXPECT_EQ(count_lines(labels) - (header ? 1 : 0), 400u);
  const auto manifest = read_json(dir("synth") / "manifest.json");
  EXPECT_EQ(manifest.at("meta").at("seed"), 1);
  EXPECT_TRUE(fs::exists(dir("synth") / "effective_config.json"));
}

TEST_F(CliTest, SynthDataIsDeterministic) {
  for (const char* name : {"det_a", "det_b"}) {
    ASSERT_EQ(rexl_cli({"synth-data", "--out", dir(name).string(), "--per-class", "3", "--size", "35"}).code, 0);
  }
  EXPECT_EQ(testing::read_text(dir("det_a") / "manifest.json"), testing::read_text(dir("det_b") / "manifest.json"));
  EXPECT_EQ(testing::read_text(dir("det_a") / "labels.csv"), testing::read_text(dir("det_b") / "labels.csv"));
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(rexl_cli({"synth-data", "--out", dir("zero").string(), "--per-class", "0"}).code, cli::kExitConfig);
  std::ofstream(dir("noversion.json")) << R"({"seed": 3})";
  EXPECT_EQ(rexl_cli({"synth-data", "--config", dir("noversion.json").string()}).code, cli::kExitConfig);
  std::ofstream(dir("unknown.json")) << R"({"version": 1, "colour": "red"})";
  EXPECT_EQ(rexl_cli({"synth-data", "--config", dir("unknown.json").string()}).code, cli::kExitConfig);
  EXPECT_EQ(rexl_cli({"no-such-command"}).code, cli::kExitConfig);
  EXPECT_EQ(rexl_cli({"train", "--data", (dir("missing")).string(), "--out", dir("x").string()}).code,
            cli::kExitConfig);
  EXPECT_EQ(rexl_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, ConfigFileAndFlagsMerge) {
  std::ofstream(dir("cfg.json")) << R"({"version": 1, "seed": 9, "dataset": {"images_per_class": 2, "size": 35}})";
  const auto r = rexl_cli({"synth-data", "--config", dir("cfg.json").string(), "--out", dir("merged").string(),
                           "--classes", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto eff = read_json(dir("merged") / "effective_config.json");
  EXPECT_EQ(eff.at("seed"), 9);
  EXPECT_EQ(eff.at("dataset").at("classes"), 2);
  EXPECT_EQ(count_files(dir("merged"), ".png"), 4u);
}

TEST_F(CliTest, ClassScopeDrawsOnlyThatClass) {
  const auto r = rexl_cli(train_args(dir("cs").string(), {"--scope", "class", "--class-id", "2"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = read_json(dir("cs") / "train_summary.json");
  EXPECT_EQ(summary.at("classes"), json::array({2}));
  EXPECT_EQ(summary.at("scope"), "class");
  EXPECT_TRUE(fs::exists(dir("cs") / "agent.json"));
  const auto log = testing::read_text(dir("cs") / "train_log.csv");
  EXPECT_NE(log.find("step,mean_return,policy_loss,value_loss,entropy"), std::string::npos);
}

TEST_F(CliTest, ImageScopeSeesOneImage) {
  const auto labels = testing::read_text(data() / "labels.csv");
  std::istringstream in(labels);
  std::string line;
  std::getline(in, line);
  if (line.rfind("filename", 0) == 0) std::getline(in, line);
  const auto file = line.substr(0, line.find(','));
  const int label = std::stoi(line.substr(line.find(',') + 1));
  const auto r = rexl_cli(train_args(dir("is").string(),
                                     {"--scope", "image", "--image", file, "--class-id", std::to_string(label)}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json(dir("is") / "train_summary.json").at("distinct_images"), 1);
}

TEST_F(CliTest, ResumeMatchesUninterruptedRun) {
  ASSERT_EQ(rexl_cli(train_args(dir("full").string())).code, 0);
  const auto part = rexl_cli(train_args(dir("part").string(), {"--max-updates", "1"}));
  ASSERT_EQ(part.code, 0) << part.err;
  EXPECT_FALSE(fs::exists(dir("part") / "agent.json"));
  const auto resumed = rexl_cli(train_args(dir("part").string(), {"--resume"}));
  ASSERT_EQ(resumed.code, 0) << resumed.err;
  EXPECT_EQ(testing::read_text(dir("part") / "agent.json"), testing::read_text(dir("full") / "agent.json"));
}

TEST_F(CliTest, ExplainThroughSubprocessStub) {
  ASSERT_EQ(rexl_cli(train_args(dir("agent_sp").string())).code, 0);
  const auto cmd = testing::stub_command_line("fixed", {"--height", "35", "--width", "35", "--channels", "3", "--scores", "0.1,0.2,0.3,0.4"});
  const auto r = rexl_cli({"explain", "--data", data().string(), "--classifier", "subprocess:" + cmd, "--agent",
                           (dir("agent_sp") / "agent.json").string(), "--class", "0", "--limit", "2", "--out",
                           dir("explain_sp").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t maps = 0;
  for (const auto& e : fs::directory_iterator(dir("explain_sp") / "maps")) {
    if (e.path().extension() != ".json") continue;
    ++maps;
    const auto m = read_json(e.path());
    EXPECT_EQ(m.at("calls"), 50);
    EXPECT_EQ(m.at("weights").size(), 49u);
    EXPECT_TRUE(m.at("meta").contains("config_hash"));
    auto png = e.path();
    png.replace_extension(".png");
    EXPECT_TRUE(fs::exists(png));
  }
  EXPECT_EQ(maps, 2u);
}

TEST_F(CliTest, TransportFailureExitsThree) {
  ASSERT_EQ(rexl_cli(train_args(dir("agent_bad").string())).code, 0);
  const auto cmd = testing::stub_command_line("bad", {"--height", "35", "--width", "35", "--channels", "3", "--scores", "0.1,0.2,0.3,0.4"});
  const auto r = rexl_cli({"explain", "--data", data().string(), "--classifier", "subprocess:" + cmd, "--agent",
                           (dir("agent_bad") / "agent.json").string(), "--class", "0", "--limit", "1", "--out",
                           dir("explain_bad").string()});
  EXPECT_EQ(r.code, cli::kExitTransport) << r.err;
}

TEST_F(CliTest, TrainingFailureExitsFour) {
  const auto r = rexl_cli({"train-classifier", "--data", data().string(), "--out", dir("clf_fail").string(),
                           "--epochs", "1", "--set", "model.required_accuracy=1.0", "--set", "model.hidden=[2]",
                           "--set", "model.pool=1"});
  EXPECT_EQ(r.code, cli::kExitTraining) << r.err;
}

TEST_F(CliTest, ClassOutOfRangeIsConfigError) {
  ASSERT_EQ(rexl_cli(train_args(dir("agent_range").string())).code, 0);
  const auto r = rexl_cli({"explain", "--data", data().string(), "--classifier", tiny(), "--agent",
                           (dir("agent_range") / "agent.json").string(), "--class", "9", "--out",
                           dir("explain_range").string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
}

class PlantedCliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = std::make_unique<testing::TempDir>("cli_planted");
    const auto r = rexl_cli(planted({"train", "--out", (*root_ / "agent").string(), "--steps", "490", "--hidden",
                                     "16", "--set", "agent.pool=7"}));
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { root_.reset(); }

  static std::vector<std::string> planted(std::vector<std::string> args) {
    for (const char* a : {"--data", "planted", "--classifier", "planted", "--set", "data.count=3", "--set",
                          "data.size=56"}) {
      args.emplace_back(a);
    }
    return args;
  }
  static std::string agent() { return (*root_ / "agent" / "agent.json").string(); }
  static fs::path dir(const std::string& name) { return *root_ / name; }

  static std::unique_ptr<testing::TempDir> root_;
};

std::unique_ptr<testing::TempDir> PlantedCliTest::root_;

TEST_F(PlantedCliTest, CompareHasFourMethodRows) {
  const auto r = rexl_cli(planted({"compare", "--agent", agent(), "--masks", "200", "--out", dir("cmp").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = read_json(dir("cmp") / "compare.json");
  ASSERT_EQ(report.at("methods").size(), 4u);
  const auto csv = testing::read_text(dir("cmp") / "compare.csv");
  std::size_t rows = 0;
  std::istringstream in(csv);
  std::string line, header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = line;
      continue;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
  for (const char* col : {"method", "deletion_auc", "insertion_auc", "calls"}) {
    EXPECT_NE(header.find(col), std::string::npos) << col;
  }
  EXPECT_TRUE(fs::exists(dir("cmp") / "compare.txt"));
}

TEST_F(PlantedCliTest, EvaluateWritesOneReportPerLambda) {
  const auto r = rexl_cli(planted({"evaluate", "--agent", agent(), "--lambdas", "0,0.7,0.8,1", "--out",
                                   dir("eval").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(dir("eval") / "reports")) reports += e.path().extension() == ".json";
  EXPECT_EQ(reports, 4u);
  EXPECT_TRUE(fs::exists(dir("eval") / "reports" / "eval_lambda_0.7.json"));
  const auto rep = read_json(dir("eval") / "reports" / "eval_lambda_1.json");
  EXPECT_EQ(rep.at("meta").at("format"), "rexl-eval/1");
}

TEST_F(PlantedCliTest, ReportsAreReproducible) {
  for (const char* name : {"rep_a", "rep_b"}) {
    ASSERT_EQ(rexl_cli(planted({"evaluate", "--agent", agent(), "--out", dir(name).string()})).code, 0);
  }
  EXPECT_EQ(testing::read_text(dir("rep_a") / "reports" / "eval_lambda_1.json"),
            testing::read_text(dir("rep_b") / "reports" / "eval_lambda_1.json"));
}

TEST_F(PlantedCliTest, BenchReportsCallCounts) {
  const auto r = rexl_cli(planted({"bench", "--agent", agent(), "--masks", "100", "--limit", "1", "--out",
                                   dir("bench").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = read_json(dir("bench") / "bench.json");
  bool saw_rexl = false;
  for (const auto& m : report.at("methods")) {
    if (m.at("method") == "rexl") {
      saw_rexl = true;
      EXPECT_EQ(m.at("mean_calls"), 50.0);
    }
    if (m.at("method") == "rise") {
      EXPECT_EQ(m.at("mean_calls"), 100.0);
    }
  }
  EXPECT_TRUE(saw_rexl);
  EXPECT_TRUE(report.contains("environment"));
}

}  // namespace
}  // namespace rexl

#endif
