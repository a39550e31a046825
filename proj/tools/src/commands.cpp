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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "data.hpp"
#include "io.hpp"
#include "rexl/agent/policy.hpp"
#include "rexl/agent/trainer.hpp"
#include "rexl/baselines/baselines.hpp"
#include "rexl/cli/cli.hpp"
#include "rexl/core/error.hpp"
#include "rexl/core/image_io.hpp"
#include "rexl/core/parallel.hpp"
#include "rexl/core/rng.hpp"
#include "rexl/metrics/metrics.hpp"
#include "rexl/saliency/saliency.hpp"

namespace rexl::cli {

namespace {

constexpr std::string_view kDatasetFormat = "rexl-dataset/1";
constexpr std::string_view kClassifierReportFormat = "rexl-classifier-report/1";
constexpr std::string_view kTrainLogFormat = "rexl-train-log/1";
constexpr std::string_view kTrainSummaryFormat = "rexl-train-summary/1";
constexpr std::string_view kHeatmapFormat = "rexl-heatmap/1";
constexpr std::string_view kExplainSummaryFormat = "rexl-explain-summary/1";
constexpr std::string_view kEvalFormat = "rexl-eval/1";
constexpr std::string_view kCurveFormat = "rexl-curve/1";
constexpr std::string_view kCompareFormat = "rexl-compare/1";
constexpr std::string_view kBenchFormat = "rexl-bench/1";

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::uint64_t seed_of(const json& c) { return get<std::uint64_t>(c, "seed"); }

std::filesystem::path prepare_out(json& config) {
  const auto out = std::filesystem::path(get<std::string>(config, "out"));
  if (out.empty()) throw ConfigError("out must name a directory");
  const int threads = get<int>(config, "threads");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  config["threads"] = resolve_threads(threads);
  ensure_directory(out);
  write_effective_config(out, config);
  return out;
}

void write_artifact(const std::filesystem::path& path, json body, const json& config, std::string_view format) {
  body["meta"] = artifact_meta(config, format);
  write_file(path, body.dump(2) + "\n");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

PolicyParams load_agent(const json& config) {
  const auto path = std::filesystem::path(get<std::string>(config, "agent"));
  if (path.empty() || !std::filesystem::is_regular_file(path)) {
    throw ConfigError("agent weights not found: '" + path.string() + "'");
  }
  return load_params(path);
}

// Class explained for a sample: the explicit "class", else the agent's class
// for single-class scopes, else the sample's label.
int target_class(const json& config, const PolicyParams* params, const Sample& sample) {
  const int requested = get<int>(config, "class");
  int target = sample.label;
  if (requested >= 0) {
    target = requested;
  } else if (params && params->scope != AgentScope::kDataset) {
    target = params->class_id;
  }
  if (target < 0 || target >= sample.classifier->num_classes()) {
    throw ConfigError("class " + std::to_string(target) + " is out of range for a classifier with " +
                      std::to_string(sample.classifier->num_classes()) + " classes");
  }
  return target;
}

EvalConfig eval_config(const json& e, std::uint64_t seed) {
  EvalConfig c;
  c.cells_per_step = get<int>(e, "cells_per_step");
  c.blur_sigma = get<double>(e, "blur_sigma");
  try {
    c.fill = parse_fill(get<std::string>(e, "fill"));
    c.seed = seed;
    c.validate();
  } catch (const ContractError& ex) {
    throw ConfigError(std::string("eval: ") + ex.what());
  }
  return c;
}

json eval_config_json(const EvalConfig& c) {
  return {{"cells_per_step", c.cells_per_step}, {"blur_sigma", c.blur_sigma}, {"fill", to_string(c.fill)}};
}

RiseConfig rise_config(const json& config, int k, std::uint64_t seed, int threads) {
  const auto& r = config.at("rise");
  RiseConfig c;
  c.masks = get<int>(r, "masks");
  c.keep_prob = get<double>(r, "keep_prob");
  c.random_shift = get<bool>(r, "random_shift");
  c.k = k;
  c.seed = seed;
  c.threads = threads;
  try {
    c.validate();
  } catch (const ContractError& ex) {
    throw ConfigError(std::string("rise: ") + ex.what());
  }
  return c;
}

json item_json(const ImageEval& e, bool timing) {
  json j{{"image_id", e.image_id},
         {"method", e.method},
         {"deletion_auc", e.deletion_auc},
         {"insertion_auc", e.insertion_auc},
         {"calls", e.calls}};
  if (timing) j["seconds"] = e.seconds;
  return j;
}

json summary_json(const EvalReport& report, bool timing) {
  json out = json::object();
  for (const auto& [method, s] : report.summary()) {
    json j{{"images", s.images}, {"deletion_auc", s.deletion_auc}, {"insertion_auc", s.insertion_auc},
           {"calls", s.calls}};
    if (timing) j["seconds"] = s.seconds;
    out[method] = j;
  }
  return out;
}

json environment_json(const RunEnvironment& env) {
  return {{"cpu", env.cpu},
          {"hardware_threads", env.hardware_threads},
          {"threads", env.threads},
          {"compiler", env.compiler}};
}

const std::vector<std::string> kKnownMethods{"rexl", "rise", "greedy", "random"};

std::vector<std::string> methods_of(const json& config) {
  const auto methods = get<std::vector<std::string>>(config, "methods");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  for (const auto& m : methods) {
    if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) == kKnownMethods.end()) {
      throw ConfigError("unknown method '" + m + "' (expected rexl, rise, greedy or random)");
    }
  }
  return methods;
}

bool uses_agent(const std::vector<std::string>& methods) {
  return std::find(methods.begin(), methods.end(), "rexl") != methods.end();
}

// Grid size for the comparison methods: the agent's when one is loaded, the
// data's otherwise.
int grid_k(const json& config, const PolicyParams* params) {
  if (params) return params->observation.k;
  return get<int>(config.at("data"), "k");
}

void check_inputs(const json& config) {
  check_data_paths(config.at("data"));
  if (config.contains("classifier")) check_classifier_paths(config.at("data"), config.at("classifier"));
}

}  // namespace

void cmd_synth_data(json config, std::ostream& log) {
  const auto& d = config.at("dataset");
  SyntheticDatasetSpec spec;
  spec.classes = get<int>(d, "classes");
  spec.images_per_class = get<int>(d, "images_per_class");
  spec.size = get<int>(d, "size");
  spec.k = get<int>(d, "k");
  spec.jitter = get<double>(d, "jitter");
  spec.noise = get<double>(d, "noise");
  spec.seed = seed_of(config);
  spec.validate();

  const auto out = prepare_out(config);
  const auto images = generate_shapes(spec);
  const auto text = artifact_text(config, "rexl-shape-image/1");
  std::ostringstream labels;
  labels << "filename,class\n";
  for (const auto& img : images) {
    write_png(out / img.name, img.image, text);
    labels << img.name << ',' << img.label << '\n';
  }
  write_file(out / "labels.csv", labels.str());

  json names = json::array();
  for (int c = 0; c < spec.classes; ++c) names.push_back(std::string(kShapeNames[c]));
  json manifest{{"spec",
                 {{"classes", spec.classes},
                  {"images_per_class", spec.images_per_class},
                  {"size", spec.size},
                  {"k", spec.k},
                  {"jitter", spec.jitter},
                  {"noise", spec.noise},
                  {"seed", spec.seed}}},
                {"class_names", names},
                {"images", images.size()}};
  write_artifact(out / "manifest.json", manifest, config, kDatasetFormat);
  log << "wrote " << images.size() << " images to " << out.string() << "\n";
}

void cmd_train_classifier(json config, std::ostream& log) {
  check_data_paths(config.at("data"));
  const auto& m = config.at("model");
  TinyTrainConfig tc;
  tc.hidden = get<std::vector<int>>(m, "hidden");
  tc.pool = get<int>(m, "pool");
  tc.use_conv = get<bool>(m, "conv");
  tc.conv_filters = get<int>(m, "conv_filters");
  const auto head = get<std::string>(m, "head");
  if (head == "softmax") {
    tc.head = HeadKind::kSoftmax;
  } else if (head == "sigmoid") {
    tc.head = HeadKind::kSigmoid;
  } else {
    throw ConfigError("model.head must be 'softmax' or 'sigmoid'");
  }
  tc.epochs = get<int>(m, "epochs");
  tc.batch_size = get<int>(m, "batch_size");
  tc.learning_rate = get<double>(m, "learning_rate");
  tc.stop_accuracy = get<double>(m, "stop_accuracy");
  tc.required_accuracy = get<double>(m, "required_accuracy");

  const auto out = prepare_out(config);
  const auto data = load_shapes_dataset(get<std::string>(config.at("data"), "dir"));
  Rng rng(seed_of(config));
  TinyTrainResult result;
  try {
    result = train_tiny_classifier(to_labeled(data), tc, rng);
  } catch (const ContractError& e) {
    throw ConfigError(std::string("train-classifier: ") + e.what());
  }
  auto weights = json::parse(tiny_net_to_json(result.params));
  write_artifact(out / "classifier.json", weights, config, kTinyWeightsFormat);
  write_artifact(out / "classifier_report.json",
                 {{"accuracy", result.accuracy},
                  {"epochs_run", result.epochs_run},
                  {"images", data.files.size()},
                  {"classes", data.num_classes}},
                 config, kClassifierReportFormat);
  log << "training accuracy " << result.accuracy << " after " << result.epochs_run << " epochs\n";
}

void cmd_train(json config, std::ostream& log) {
  check_inputs(config);
  const auto& a = config.at("agent");
  const auto& t = config.at("train");
  const auto& data = config.at("data");

  AgentSetup setup;
  try {
    setup.scope = parse_scope(get<std::string>(a, "scope"));
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  setup.class_id = get<int>(a, "class_id");
  setup.gamma = get<double>(a, "gamma");
  if (!(setup.gamma > 0.0 && setup.gamma <= 1.0)) throw ConfigError("agent.gamma must be in (0, 1]");
  setup.observation.k = get<int>(a, "k");
  setup.observation.pool = get<int>(a, "pool");
  setup.observation.one_hot_class = setup.scope == AgentScope::kDataset;

  TrainConfig tc;
  tc.total_steps = get<std::int64_t>(t, "total_steps");
  tc.steps_per_update = get<int>(t, "steps_per_update");
  tc.learning_rate = get<double>(t, "learning_rate");
  tc.entropy_coef = get<double>(t, "entropy_coef");
  tc.value_coef = get<double>(t, "value_coef");
  tc.rms_alpha = get<double>(t, "rms_alpha");
  tc.rms_epsilon = get<double>(t, "rms_epsilon");
  tc.max_grad_norm = get<double>(t, "max_grad_norm");
  tc.importance_clip = get<double>(t, "importance_clip");
  tc.replay_capacity = get<std::size_t>(t, "replay_capacity");
  tc.replay_per_update = get<std::size_t>(t, "replay_per_update");
  tc.hidden = get<std::vector<int>>(t, "hidden");
  tc.transport_retries = get<int>(t, "transport_retries");
  tc.checkpoint_every = get<int>(t, "checkpoint_every");
  tc.seed = seed_of(config);
  tc.validate();
  const auto max_updates = get<std::int64_t>(config, "max_updates");
  const bool resume = get<bool>(config, "resume");

  std::unique_ptr<EpisodeSource> source;
  if (is_planted(data)) {
    const auto family = planted_family(data);
    if (setup.scope != AgentScope::kDataset && setup.class_id != 0) {
      throw ConfigError("planted data has a single class; agent.class_id must be 0");
    }
    auto members = get<std::uint64_t>(data, "count");
    if (setup.scope == AgentScope::kImage) members = 1;
    setup.observation.input = {family.size, family.size, family.channels};
    setup.observation.num_classes = 1;
    source = std::make_unique<PlantedFamilySource>(family, members);
  } else {
    const auto set = load_shapes_dataset(get<std::string>(data, "dir"));
    auto classifier = make_classifier(config.at("classifier"));
    if (setup.class_id < 0 || setup.class_id >= classifier->num_classes()) {
      throw ConfigError("agent.class_id is out of range");
    }
    std::vector<ImageListSource::Item> items;
    const auto image = get<std::string>(a, "image");
    for (std::size_t i = 0; i < set.files.size(); ++i) {
      const bool keep = setup.scope == AgentScope::kDataset ||
                        (setup.scope == AgentScope::kClass && set.labels[i] == setup.class_id) ||
                        (setup.scope == AgentScope::kImage && set.files[i] == image);
      if (keep) items.push_back({set.images[i], set.labels[i], set.files[i]});
    }
    if (items.empty()) {
      throw ConfigError(setup.scope == AgentScope::kImage ? "agent.image '" + image + "' is not in the dataset"
                                                          : "no training images for the requested class");
    }
    if (setup.scope == AgentScope::kImage) setup.class_id = items.front().label;
    setup.observation.input = classifier->input_shape();
    setup.observation.num_classes = classifier->num_classes();
    source = std::make_unique<ImageListSource>(classifier, std::move(items), tc.seed);
  }

  const auto out = prepare_out(config);
  tc.threads = get<int>(config, "threads");
  tc.checkpoint_path = out / "checkpoint.json";
  Trainer trainer(*source, setup, tc);
  if (resume && std::filesystem::exists(tc.checkpoint_path)) {
    trainer.load_checkpoint(tc.checkpoint_path);
    log << "resumed at step " << trainer.state().steps << "\n";
  }
  trainer.on_update = [&](const TrainLogRow& row) {
    if (trainer.state().updates % 50 == 0) {
      log << "step " << row.step << " mean return " << row.mean_return << " entropy " << row.entropy << "\n";
    }
  };
  if (!trainer.run(max_updates)) {
    trainer.save_checkpoint(tc.checkpoint_path);
    log << "stopped at step " << trainer.state().steps << "; checkpoint " << tc.checkpoint_path.string() << "\n";
    return;
  }

  const auto& state = trainer.state();
  write_artifact(out / "agent.json", json::parse(policy_to_json(state.params)), config, kAgentWeightsFormat);

  std::ostringstream csv;
  for (const auto& [key, value] : artifact_text(config, kTrainLogFormat)) csv << "# " << key << ": " << value << "\n";
  csv << "step,mean_return,policy_loss,value_loss,entropy\n" << std::setprecision(17);
  for (const auto& r : state.log) {
    csv << r.step << ',' << r.mean_return << ',' << r.policy_loss << ',' << r.value_loss << ',' << r.entropy << "\n";
  }
  write_file(out / "train_log.csv", csv.str());

  write_artifact(out / "train_summary.json",
                 {{"scope", to_string(setup.scope)},
                  {"class_id", setup.class_id},
                  {"steps", state.steps},
                  {"episodes", state.episodes},
                  {"updates", state.updates},
                  {"transport_retries", state.transport_retries},
                  {"classes", state.classes},
                  {"distinct_images", state.image_ids.size()},
                  {"threads", tc.threads}},
                 config, kTrainSummaryFormat);
  log << "trained " << state.steps << " steps over " << state.episodes << " episodes; agent "
      << (out / "agent.json").string() << "\n";
}

void cmd_explain(json config, std::ostream& log) {
  check_inputs(config);
  const auto params = load_agent(config);
  const double lambda = get<double>(config, "lambda");
  const double alpha = get<double>(config, "heatmap_alpha");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must be in [0, 1]");
  const auto samples = load_samples(config.at("data"), config.at("classifier"));
  const auto out = prepare_out(config);
  const auto seed = seed_of(config);
  const auto text = artifact_text(config, kHeatmapFormat);

  json items = json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const int target = target_class(config, &params, s);
    const auto ex = explain(params, *s.classifier, *s.image, target, lambda, mix64(seed, i));
    const auto stem = sample_stem(s.id);
    auto map = json::parse(saliency_to_json(ex.map));
    map["image_id"] = s.id;
    map["target_class"] = target;
    map["calls"] = ex.calls;
    write_artifact(out / "maps" / (stem + ".json"), map, config, kSaliencyFormat);
    const auto heat = render_heatmap(ex.map, s.image->height(), s.image->width());
    write_png(out / "maps" / (stem + ".png"), overlay(*s.image, heat, alpha), text);
    items.push_back({{"image_id", s.id}, {"target_class", target}, {"calls", ex.calls}, {"argmax", ex.map.argmax()}});
  }
  write_artifact(out / "explain_summary.json", {{"lambda", lambda}, {"items", items}}, config, kExplainSummaryFormat);
  log << "explained " << samples.size() << " images into " << (out / "maps").string() << "\n";
}

void cmd_evaluate(json config, std::ostream& log) {
  check_inputs(config);
  const auto params = load_agent(config);
  const auto lambdas = get<std::vector<double>>(config, "lambdas");
  if (lambdas.empty()) throw ConfigError("lambdas must not be empty");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("every lambda must be in [0, 1]");
  }
  const bool curves = get<bool>(config, "curves");
  const auto samples = load_samples(config.at("data"), config.at("classifier"));
  const auto seed = seed_of(config);
  eval_config(config.at("eval"), seed);
  const auto out = prepare_out(config);
  const int k = params.observation.k;

  std::vector<Explanation> explanations;
  std::vector<int> targets;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    targets.push_back(target_class(config, &params, s));
    explanations.push_back(explain(params, *s.classifier, *s.image, targets.back(), 1.0, mix64(seed, i)));
  }

  for (double lambda : lambdas) {
    const auto tag = "lambda_" + num(lambda);
    EvalReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      const auto raw = accumulate_credit(explanations[i].trace, k, lambda);
      const auto map = normalize_map(raw, k, lambda);
      const auto ec = eval_config(config.at("eval"), mix64(seed, i));
      const auto del = deletion_curve(*s.classifier, *s.image, targets[i], map, ec);
      const auto ins = insertion_curve(*s.classifier, *s.image, targets[i], map, ec);
      report.items.push_back({s.id, "rexl", auc(del), auc(ins), explanations[i].calls, 0.0});
      if (curves) {
        const auto dir = out / "curves" / tag;
        ensure_directory(dir);
        const auto header = artifact_text(config, kCurveFormat);
        auto h = header;
        h["image_id"] = s.id;
        h["lambda"] = num(lambda);
        h["curve"] = "deletion";
        write_curve_csv(dir / (sample_stem(s.id) + "_deletion.csv"), del, h);
        h["curve"] = "insertion";
        write_curve_csv(dir / (sample_stem(s.id) + "_insertion.csv"), ins, h);
      }
    }
    json items = json::array();
    for (const auto& e : report.items) items.push_back(item_json(e, false));
    const auto summary = report.summary();
    write_artifact(out / "reports" / ("eval_" + tag + ".json"),
                   {{"lambda", lambda},
                    {"eval", eval_config_json(eval_config(config.at("eval"), seed))},
                    {"threads", config.at("threads")},
                    {"items", items},
                    {"summary", summary_json(report, false)}},
                   config, kEvalFormat);
    const auto& s = summary.at("rexl");
    log << "lambda " << num(lambda) << ": deletion " << s.deletion_auc << " insertion " << s.insertion_auc << "\n";
  }
}

namespace {

struct MethodResult {
  SaliencyMap map;
  std::uint64_t calls = 0;
};

MethodResult run_method(const std::string& method, const json& config, const PolicyParams* params, Classifier& clf,
                        const ImageTensor& image, int target, std::size_t index) {
  const auto seed = seed_of(config);
  const int k = grid_k(config, params);
  const double lambda = get<double>(config, "lambda");
  InstrumentedClassifier counter(clf);
  MethodResult r;
  if (method == "rexl") {
    r.map = explain(*params, counter, image, target, lambda, mix64(seed, index)).map;
  } else if (method == "rise") {
    const auto rc = rise_config(config, k, mix64(seed, index), get<int>(config, "threads"));
    const auto pixel = rise_saliency(counter, image, target, rc);
    r.map = normalize_map(pool_to_grid(pixel.saliency, k), k, lambda);
  } else if (method == "greedy") {
    int budget = get<int>(config, "greedy_budget");
    if (budget <= 0) budget = k * k;
    r.map = greedy_saliency(counter, image, target, k, budget, lambda, mix64(seed, index)).map;
  } else {
    Rng rng(seed, index);
    r.map = random_saliency(k, rng);
  }
  r.calls = counter.calls();
  return r;
}

std::string table_text(const std::map<std::string, EvalReport::Summary>& summary,
                       const std::vector<std::string>& order) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "method" << std::right << std::setw(8) << "images" << std::setw(12)
     << "deletion" << std::setw(12) << "insertion" << std::setw(10) << "calls" << std::setw(12) << "seconds\n";
  for (const auto& m : order) {
    const auto& s = summary.at(m);
    os << std::left << std::setw(8) << m << std::right << std::setw(8) << s.images << std::fixed
       << std::setprecision(4) << std::setw(12) << s.deletion_auc << std::setw(12) << s.insertion_auc
       << std::setprecision(1) << std::setw(10) << s.calls << std::setprecision(4) << std::setw(11) << s.seconds
       << "\n";
  }
  return os.str();
}

}  // namespace

void cmd_compare(json config, std::ostream& log) {
  check_inputs(config);
  const auto methods = methods_of(config);
  std::optional<PolicyParams> params;
  if (uses_agent(methods)) params = load_agent(config);
  const PolicyParams* agent = params ? &*params : nullptr;
  const auto samples = load_samples(config.at("data"), config.at("classifier"));
  const auto seed = seed_of(config);
  eval_config(config.at("eval"), seed);
  const auto out = prepare_out(config);

  EvalReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const int target = target_class(config, agent, s);
    const auto ec = eval_config(config.at("eval"), mix64(seed, i));
    for (const auto& m : methods) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = run_method(m, config, agent, *s.classifier, *s.image, target, i);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double del = auc(deletion_curve(*s.classifier, *s.image, target, r.map, ec));
      const double ins = auc(insertion_curve(*s.classifier, *s.image, target, r.map, ec));
      report.items.push_back({s.id, m, del, ins, r.calls, seconds});
    }
  }

  const auto summary = report.summary();
  json items = json::array();
  for (const auto& e : report.items) items.push_back(item_json(e, true));
  write_artifact(out / "compare.json",
                 {{"methods", methods},
                  {"lambda", config.at("lambda")},
                  {"eval", eval_config_json(eval_config(config.at("eval"), seed))},
                  {"environment", environment_json(describe_environment(get<int>(config, "threads")))},
                  {"items", items},
                  {"summary", summary_json(report, true)}},
                 config, kCompareFormat);

  std::ostringstream csv;
  for (const auto& [key, value] : artifact_text(config, kCompareFormat)) csv << "# " << key << ": " << value << "\n";
  csv << "method,images,deletion_auc,insertion_auc,calls,seconds\n" << std::setprecision(17);
  for (const auto& m : methods) {
    const auto& s = summary.at(m);
    csv << m << ',' << s.images << ',' << s.deletion_auc << ',' << s.insertion_auc << ',' << s.calls << ','
        << s.seconds << "\n";
  }
  write_file(out / "compare.csv", csv.str());
  const auto table = table_text(summary, methods);
  write_file(out / "compare.txt", table);
  log << table;
}

void cmd_bench(json config, std::ostream& log) {
  check_inputs(config);
  const auto methods = methods_of(config);
  std::optional<PolicyParams> params;
  if (uses_agent(methods)) params = load_agent(config);
  const PolicyParams* agent = params ? &*params : nullptr;
  const double latency_ms = get<double>(config, "latency_ms");
  const int repetitions = get<int>(config, "repetitions");
  if (latency_ms < 0.0) throw ConfigError("latency_ms must be >= 0");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  const auto samples = load_samples(config.at("data"), config.at("classifier"));
  const auto out = prepare_out(config);
  const int threads = get<int>(config, "threads");

  std::map<std::string, BenchmarkEntry> totals;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const int target = target_class(config, agent, s);
    std::vector<MethodHandle> handles;
    for (const auto& m : methods) {
      handles.push_back({m, [&, m, i](Classifier& clf, const ImageTensor& image, int cls) {
                           run_method(m, config, agent, clf, image, cls, i);
                         }});
    }
    InstrumentedClassifier counter(
        *s.classifier, std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::duration<double, std::milli>(latency_ms)));
    const LabeledImage li{s.image.get(), target};
    const auto report = benchmark(handles, counter, std::span<const LabeledImage>(&li, 1), repetitions, threads);
    for (const auto& e : report.methods) {
      auto& t = totals[e.method];
      t.method = e.method;
      t.mean_seconds += e.mean_seconds * static_cast<double>(e.runs);
      t.mean_calls += e.mean_calls * static_cast<double>(e.runs);
      t.runs += e.runs;
    }
  }

  json entries = json::array();
  std::ostringstream table;
  table << std::left << std::setw(8) << "method" << std::right << std::setw(8) << "runs" << std::setw(14)
        << "seconds" << std::setw(12) << "calls" << std::setw(12) << "speedup\n";
  const double base = totals.count("rexl") ? totals["rexl"].mean_seconds / static_cast<double>(totals["rexl"].runs)
                                           : 0.0;
  for (const auto& m : methods) {
    auto& t = totals.at(m);
    const double n = static_cast<double>(std::max<std::size_t>(t.runs, 1));
    t.mean_seconds /= n;
    t.mean_calls /= n;
    json e{{"method", m}, {"runs", t.runs}, {"mean_seconds", t.mean_seconds}, {"mean_calls", t.mean_calls}};
    const double rel = base > 0.0 ? t.mean_seconds / base : 0.0;
    if (base > 0.0) e["relative_to_rexl"] = rel;
    entries.push_back(e);
    table << std::left << std::setw(8) << m << std::right << std::setw(8) << t.runs << std::fixed
          << std::setprecision(6) << std::setw(14) << t.mean_seconds << std::setprecision(1) << std::setw(12)
          << t.mean_calls << std::setprecision(2) << std::setw(11) << rel << "\n";
  }
  write_artifact(out / "bench.json",
                 {{"latency_ms", latency_ms},
                  {"repetitions", repetitions},
                  {"images", samples.size()},
                  {"environment", environment_json(describe_environment(threads))},
                  {"methods", entries}},
                 config, kBenchFormat);
  write_file(out / "bench.txt", table.str());
  log << table.str();
}

}  // namespace rexl::cli
