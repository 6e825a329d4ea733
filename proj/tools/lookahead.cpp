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

// lookahead: generate problem sets, simulate heuristic completions, predict
// and evaluate digit-wise accuracy, fetch real completions, train probes.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lookahead/cli.hpp"

namespace {

using namespace lookahead;

void print_predictions(const cli::PredictResult& r, const std::string& mode) {
  for (const auto& row : r.rows) {
    std::cout << "k=" << row.k << " c_max=" << row.c_max
              << " failing=" << row.failing_t_values.size() << " accuracy="
              << to_decimal(mode == "uniform" ? row.predicted_accuracy : row.dataset_mode_accuracy);
    if (mode == "uniform" && !row.annotation.empty()) std::cout << "  [" << row.annotation << "]";
    std::cout << "\n";
  }
}

void print_report(const cli::EvaluateResult& r) {
  std::cout << render_report({r.report}, ReportFormat::kMarkdown) << "\n"
            << render_determinacy(r.report.dataset, r.determinacy, ReportFormat::kMarkdown);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Limited-lookahead carry heuristic: datasets, simulation and evaluation"};
  app.require_subcommand(1);

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate problem sets");
  gen_cmd->add_option("--multi", gen.multi, "Operand-count range for the k-operand sets, e.g. 2..11");
  gen_cmd->add_option("--scenario,--scenarios", gen.scenarios, "Carry-scenario sets DS1..DS8, or 'all'");
  gen_cmd->add_option("--n", gen.n, "Records per set (default 5000 multi, 100 scenario)");
  gen_cmd->add_option("--seed", gen.seed, "Run seed");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  cli::SimulateOptions sim;
  bool sim_strict = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the heuristic mock model over a dataset");
  sim_cmd->add_option("--dataset", sim.dataset, "Dataset JSON-lines file")->required();
  sim_cmd->add_option("--w,--chunk-width", sim.chunk_width, "Result digits per emitted token");
  sim_cmd->add_option("--L,--lookahead", sim.lookahead, "Digit sums inspected below each chunk");
  sim_cmd->add_option("--policy", sim.policy, "Tie-break policy: uniform|low|high");
  sim_cmd->add_option("--seed", sim.seed, "Run seed");
  sim_cmd->add_flag("--strict-boundary", sim_strict,
                    "Bracket the carry out of position 0 instead of using c_0 = 0");
  sim_cmd->add_option("--out", sim.out, "Output directory");

  cli::PredictOptions pred;
  auto* pred_cmd = app.add_subcommand("predict", "Analytic first-digit accuracy table");
  pred_cmd->add_option("--k", pred.k_range, "Operand-count range, e.g. 2..11");
  pred_cmd->add_option("--mode", pred.mode, "uniform (every t equally likely) | dataset (convolved digits)");
  pred_cmd->add_option("--out", pred.out, "Output directory");

  cli::EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score completions digit by digit");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset JSON-lines file")->required();
  eval_cmd->add_option("--predictions", eval.predictions, "Predictions JSON-lines file")->required();
  eval_cmd->add_option("--setting", eval.setting, "Setting label for the report");
  eval_cmd->add_option("--L,--lookahead", eval.lookahead, "Lookahead for the determinacy split");
  eval_cmd->add_option("--out", eval.out, "Output directory");

  cli::FetchOptions fetch;
  std::string prompt_mode = "zero";
  std::string auth_env, model;
  auto* fetch_cmd = app.add_subcommand("fetch", "Collect completions from an HTTP endpoint");
  fetch_cmd->add_option("--dataset", fetch.dataset, "Dataset JSON-lines file")->required();
  fetch_cmd->add_option("--endpoint", fetch.config.endpoint, "http://host:port/path")->required();
  fetch_cmd->add_option("--auth-env", auth_env, "Environment variable holding a bearer token");
  fetch_cmd->add_option("--model", model, "Value for a 'model' request field");
  fetch_cmd->add_option("--temperature", fetch.config.temperature, "Sampling temperature");
  fetch_cmd->add_option("--max-tokens", fetch.config.max_tokens, "Completion length limit");
  fetch_cmd->add_option("--rate-limit", fetch.config.rate_limit, "Requests per second (0 = no limit)");
  fetch_cmd->add_option("--concurrency", fetch.config.concurrency, "Requests in flight");
  fetch_cmd->add_option("--max-attempts", fetch.config.max_attempts, "Attempts per record");
  fetch_cmd->add_option("--backoff-ms", fetch.config.backoff_ms, "First retry delay, doubled per retry");
  fetch_cmd->add_option("--timeout-ms", fetch.config.timeout_ms, "Connect/read timeout");
  fetch_cmd->add_option("--prompt", prompt_mode, "Prompt template: zero|one");
  fetch_cmd->add_option("--prompt-field", fetch.config.prompt_field, "JSON pointer for the prompt");
  fetch_cmd->add_option("--completion-field", fetch.config.completion_field,
                        "JSON pointer to the completion text in the response");
  fetch_cmd->add_option("--temperature-field", fetch.config.temperature_field, "JSON pointer");
  fetch_cmd->add_option("--max-tokens-field", fetch.config.max_tokens_field, "JSON pointer");
  fetch_cmd->add_option("--out", fetch.out, "Output directory");

  cli::ProbeOptions probe;
  bool no_standardize = false;
  auto* probe_cmd = app.add_subcommand("probe", "Train and evaluate linear digit probes");
  probe_cmd->add_option("--train", probe.train, "Train split (JSON lines or binary)")->required();
  probe_cmd->add_option("--test", probe.test, "Test split (JSON lines or binary)")->required();
  probe_cmd->add_option("--targets", probe.targets, "Target digits: s2 s1 s0");
  probe_cmd->add_option("--layers", probe.layers, "Layer range, e.g. 0..31 (default: all)");
  probe_cmd->add_option("--lr", probe.hyper.learning_rate, "Step size");
  probe_cmd->add_option("--epochs", probe.hyper.max_epochs, "Epoch cap");
  probe_cmd->add_option("--l2", probe.hyper.l2, "L2 penalty on weights");
  probe_cmd->add_option("--tolerance", probe.hyper.tolerance, "Stop when loss improves less");
  probe_cmd->add_flag("--no-standardize", no_standardize, "Use raw features");
  probe_cmd->add_option("--out", probe.out, "Output directory");

  cli::ProbeFixtureOptions fixture;
  auto* fixture_cmd = app.add_subcommand("probe-fixture", "Write a synthetic probe dataset");
  fixture_cmd->add_option("--n-train", fixture.n_train);
  fixture_cmd->add_option("--n-test", fixture.n_test);
  fixture_cmd->add_option("--dim", fixture.dim);
  fixture_cmd->add_option("--layers", fixture.layers);
  fixture_cmd->add_option("--seed", fixture.seed);
  fixture_cmd->add_flag("--binary", fixture.binary, "Packed binary instead of JSON lines");
  fixture_cmd->add_option("--out", fixture.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::kValidation);
  }

  try {
    if (*gen_cmd) {
      for (const auto& path : cli::cmd_gen(gen, args)) std::cout << path << "\n";
    } else if (*sim_cmd) {
      sim.exact_at_boundary = !sim_strict;
      std::cout << cli::cmd_simulate(sim, args) << "\n";
    } else if (*pred_cmd) {
      print_predictions(cli::cmd_predict(pred, args), pred.mode == "dataset" ? "dataset" : "uniform");
    } else if (*eval_cmd) {
      print_report(cli::cmd_evaluate(eval, args));
    } else if (*fetch_cmd) {
      if (!auth_env.empty()) fetch.config.auth_env = auth_env;
      if (!model.empty()) fetch.config.model = model;
      if (prompt_mode == "one") {
        fetch.config.prompt_mode = PromptMode::kOneShot;
      } else if (prompt_mode != "zero") {
        throw ValidationError("--prompt must be zero or one");
      }
      const auto s = cli::cmd_fetch(fetch, args);
      std::cout << "fetched " << s.fetched << ", resumed " << s.resumed << ", retries "
                << s.retries << "\n";
    } else if (*probe_cmd) {
      probe.hyper.standardize = !no_standardize;
      std::cout << probing::sweep_to_csv(cli::cmd_probe(probe, args));
    } else if (*fixture_cmd) {
      const auto [train, test] = cli::cmd_probe_fixture(fixture, args);
      std::cout << train << "\n" << test << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  return 0;
}
