// Copyright 2026 The lookahead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command implementations behind the `lookahead` executable. Each command
// writes its outputs plus one manifest line into its output directory and
// reports failures by throwing a lookahead::Error carrying the exit code.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lookahead/datasets.hpp"
#include "lookahead/evaluator.hpp"
#include "lookahead/fetch.hpp"
#include "lookahead/manifest.hpp"
#include "lookahead/mock_model.hpp"
#include "lookahead/predictor.hpp"
#include "lookahead/probing.hpp"

namespace lookahead::cli {

/// Parses "a..b" or "a" into an inclusive range.
inline std::pair<long, long> parse_range(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const long v = std::stol(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const long lo = std::stol(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(text);
    const std::string rest = text.substr(dots + 2);
    const long hi = std::stol(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    if (lo > hi) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ValidationError("bad range '" + text + "' (expected N or A..B)");
  }
}

inline std::string path_in(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

inline std::string stem_of(const std::string& path) {
  std::string stem = std::filesystem::path(path).filename().string();
  if (auto pos = stem.find('.'); pos != std::string::npos) stem.resize(pos);
  return stem;
}

// gen ------------------------------------------------------------------------

struct GenOptions {
  std::optional<std::string> multi;  // k range, e.g. "2..11"
  std::vector<std::string> scenarios;
  std::size_t n = 0;  // 0 = the set's default size
  std::uint64_t seed = 42;
  std::string out = ".";
};

inline std::vector<std::string> cmd_gen(const GenOptions& opt,
                                        const std::vector<std::string>& argv = {}) {
  std::vector<ScenarioSpec> specs;
  if (opt.multi) {
    const auto [lo, hi] = parse_range(*opt.multi);
    for (long k = lo; k <= hi; ++k) {
      if (k < 2) throw ValidationError("multi-operand sets need k >= 2");
      specs.push_back(multi_operand_spec(static_cast<std::size_t>(k)));
    }
  }
  for (const auto& name : opt.scenarios) {
    if (name == "all") {
      for (const auto& s : scenario_names()) specs.push_back(scenario_spec(s));
    } else {
      specs.push_back(scenario_spec(name));
    }
  }
  if (specs.empty()) throw ValidationError("nothing to generate: pass --multi and/or --scenario");

  ensure_directory(opt.out);
  RunManifest manifest;
  manifest.command = "gen";
  manifest.argv = argv;
  manifest.seed = opt.seed;
  for (const auto& spec : specs) {
    const std::size_t n = opt.n ? opt.n : spec.default_count;
    const auto records = generate(spec, n, opt.seed);
    const auto path = path_in(opt.out, spec.name + ".jsonl");
    write_dataset(records, path);
    manifest.outputs.push_back(path);
    manifest.datasets.push_back({spec.name, opt.seed, records.size(), kGeneratorVersion});
  }
  append_manifest(opt.out, manifest);
  return manifest.outputs;
}

// simulate ---------------------------------------------------------------------

struct SimulateOptions {
  std::string dataset;
  int chunk_width = 1;
  int lookahead = 1;
  std::string policy = "uniform";
  std::uint64_t seed = 0;
  bool exact_at_boundary = true;
  std::string out = ".";
};

inline std::string cmd_simulate(const SimulateOptions& opt,
                                const std::vector<std::string>& argv = {}) {
  MockModelConfig config;
  config.chunk_width = opt.chunk_width;
  config.lookahead = opt.lookahead;
  config.tie_break = parse_tie_break(opt.policy);
  config.rng_seed = opt.seed;
  config.exact_at_boundary = opt.exact_at_boundary;
  config.validate();
  const auto records = read_dataset(opt.dataset);
  ensure_directory(opt.out);
  const auto path = path_in(opt.out, stem_of(opt.dataset) + ".predictions.jsonl");
  write_text(path, predictions_to_jsonl(batch_complete(records, config)));

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.argv = argv;
  manifest.seed = opt.seed;
  manifest.outputs = {path};
  manifest.extra = {{"dataset", opt.dataset},
                    {"chunk_width", opt.chunk_width},
                    {"lookahead", opt.lookahead},
                    {"policy", opt.policy},
                    {"exact_at_boundary", opt.exact_at_boundary}};
  append_manifest(opt.out, manifest);
  return path;
}

// predict ----------------------------------------------------------------------

struct PredictOptions {
  std::string k_range = "2..11";
  std::string mode = "uniform";  // uniform | dataset
  std::string out = ".";
};

struct PredictResult {
  std::vector<AccuracyPrediction> rows;
  std::string csv;
  std::string markdown;
};

inline PredictResult render_prediction_table(std::vector<AccuracyPrediction> rows, bool uniform_mode) {
  PredictResult result;
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.k), std::to_string(r.c_max),
                     std::to_string(r.failing_t_values.size()), to_decimal(r.predicted_accuracy),
                     to_decimal(r.dataset_mode_accuracy), uniform_mode ? r.annotation : ""});
  }
  const std::vector<std::string> header{"k",       "c_max", "failing", "predicted_accuracy",
                                        "dataset_mode_accuracy", "annotation"};
  // Annotations contain commas and semicolons; quote them for CSV.
  auto csv_cells = cells;
  for (auto& row : csv_cells) {
    if (!row.back().empty()) row.back() = "\"" + row.back() + "\"";
  }
  result.csv = detail::render_rows(header, csv_cells, ReportFormat::kCsv);
  result.markdown = detail::render_rows(header, cells, ReportFormat::kMarkdown);
  result.rows = std::move(rows);
  return result;
}

inline PredictResult cmd_predict(PredictOptions opt,
                                 const std::vector<std::string>& argv = {}) {
  if (opt.mode == "paper") opt.mode = "uniform";  // accepted alias
  if (opt.mode != "uniform" && opt.mode != "dataset") {
    throw ValidationError("unknown mode '" + opt.mode + "' (uniform|dataset)");
  }
  const auto [lo, hi] = parse_range(opt.k_range);
  if (lo < 2) throw ValidationError("k must be >= 2");
  auto result = render_prediction_table(
      first_digit_accuracy_table(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)),
      opt.mode == "uniform");
  ensure_directory(opt.out);
  const auto csv = path_in(opt.out, "predict_" + opt.mode + ".csv");
  const auto md = path_in(opt.out, "predict_" + opt.mode + ".md");
  write_text(csv, result.csv);
  write_text(md, result.markdown);
  RunManifest manifest;
  manifest.command = "predict";
  manifest.argv = argv;
  manifest.outputs = {csv, md};
  manifest.extra = {{"k_range", opt.k_range}, {"mode", opt.mode}};
  append_manifest(opt.out, manifest);
  return result;
}

// evaluate ---------------------------------------------------------------------

struct EvaluateOptions {
  std::string dataset;
  std::string predictions;
  std::string setting = "zero-shot";
  int lookahead = 1;
  std::string out = ".";
};

struct EvaluateResult {
  AccuracyReport report;
  std::vector<DeterminacyRow> determinacy;
  std::vector<std::string> outputs;
};

inline EvaluateResult cmd_evaluate(const EvaluateOptions& opt,
                                   const std::vector<std::string>& argv = {}) {
  const auto records = read_dataset(opt.dataset);
  const auto preds = read_predictions(opt.predictions);
  const std::string name = stem_of(opt.dataset);
  EvaluateResult result;
  result.report = aggregate(records, preds, name, opt.setting);
  result.determinacy = determinacy_breakdown(records, preds, opt.lookahead);

  ensure_directory(opt.out);
  const std::string base = name + ".report";
  const auto csv = path_in(opt.out, base + ".csv");
  const auto md = path_in(opt.out, base + ".md");
  const auto det = path_in(opt.out, name + ".determinacy.csv");
  emit_report({result.report}, ReportFormat::kCsv, csv);
  emit_report({result.report}, ReportFormat::kMarkdown, md);
  write_text(det, render_determinacy(name, result.determinacy, ReportFormat::kCsv));
  result.outputs = {csv, md, det};

  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.argv = argv;
  manifest.outputs = result.outputs;
  manifest.extra = {{"dataset", opt.dataset}, {"predictions", opt.predictions}};
  append_manifest(opt.out, manifest);
  return result;
}

// fetch ------------------------------------------------------------------------

struct FetchOptions {
  std::string dataset;
  FetchConfig config;
  std::string out = ".";
};

inline FetchSummary cmd_fetch(const FetchOptions& opt, const std::vector<std::string>& argv = {}) {
  const auto records = read_dataset(opt.dataset);
  ensure_directory(opt.out);
  RunManifest manifest;
  manifest.command = "fetch";
  manifest.argv = argv;
  manifest.outputs = {path_in(opt.out, kCompletionsFile), path_in(opt.out, kRawResponsesFile)};
  manifest.extra = {{"dataset", opt.dataset},
                    {"endpoint", opt.config.endpoint},
                    {"temperature", opt.config.temperature},
                    {"max_tokens", opt.config.max_tokens}};
  try {
    auto summary = fetch_completions(records, opt.config, opt.out);
    manifest.extra["fetched"] = summary.fetched;
    manifest.extra["resumed"] = summary.resumed;
    append_manifest(opt.out, manifest);
    return summary;
  } catch (const NetworkError& e) {
    manifest.status = "partial";
    manifest.extra["error"] = e.what();
    append_manifest(opt.out, manifest);
    throw;
  }
}

// probe ------------------------------------------------------------------------

struct ProbeOptions {
  std::string train;
  std::string test;
  std::vector<std::string> targets{"s2", "s1", "s0"};
  std::string layers;  // range; empty = every layer in the train file
  probing::Hyper hyper;
  std::string out = ".";
};

inline std::vector<probing::SweepCell> cmd_probe(const ProbeOptions& opt,
                                                 const std::vector<std::string>& argv = {}) {
  const auto train = probing::load_probe_data(opt.train, probing::Split::kTrain);
  const auto test = probing::load_probe_data(opt.test, probing::Split::kTest);
  std::vector<probing::Target> targets;
  for (const auto& t : opt.targets) targets.push_back(probing::parse_target(t));
  std::vector<int> layers;
  if (opt.layers.empty()) {
    const auto all = train.layers();
    layers.assign(all.begin(), all.end());
  } else {
    const auto [lo, hi] = parse_range(opt.layers);
    for (long l = lo; l <= hi; ++l) layers.push_back(static_cast<int>(l));
  }
  const auto cells = probing::sweep(train, test, targets, layers, opt.hyper);
  ensure_directory(opt.out);
  const auto path = path_in(opt.out, "probe_grid.csv");
  write_text(path, probing::sweep_to_csv(cells));
  RunManifest manifest;
  manifest.command = "probe";
  manifest.argv = argv;
  manifest.outputs = {path};
  manifest.extra = {{"train", opt.train},
                    {"test", opt.test},
                    {"learning_rate", opt.hyper.learning_rate},
                    {"max_epochs", opt.hyper.max_epochs},
                    {"l2", opt.hyper.l2},
                    {"standardize", opt.hyper.standardize},
                    // Sampling temperature of the upstream hidden-state run.
                    {"generation_temperature", 0.1}};
  append_manifest(opt.out, manifest);
  return cells;
}

struct ProbeFixtureOptions {
  std::size_t n_train = probing::kDefaultTrain;
  std::size_t n_test = probing::kDefaultTest;
  std::size_t dim = 32;
  int layers = 2;
  std::uint64_t seed = 42;
  bool binary = false;
  std::string out = ".";
};

inline std::pair<std::string, std::string> cmd_probe_fixture(
    const ProbeFixtureOptions& opt, const std::vector<std::string>& argv = {}) {
  const auto fx = probing::make_fixture(opt.n_train, opt.n_test, opt.dim, opt.layers, opt.seed);
  ensure_directory(opt.out);
  const std::string ext = opt.binary ? ".bin" : ".jsonl";
  const auto train = path_in(opt.out, "probe_train" + ext);
  const auto test = path_in(opt.out, "probe_test" + ext);
  write_text(train, opt.binary ? probing::probe_to_binary(fx.train) : probing::probe_to_jsonl(fx.train));
  write_text(test, opt.binary ? probing::probe_to_binary(fx.test) : probing::probe_to_jsonl(fx.test));
  RunManifest manifest;
  manifest.command = "probe-fixture";
  manifest.argv = argv;
  manifest.seed = opt.seed;
  manifest.outputs = {train, test};
  append_manifest(opt.out, manifest);
  return {train, test};
}

}  // namespace lookahead::cli
