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

// Completion server fixture: answers with exact sums or with the mock model.

#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lookahead/stub_server.hpp"

int main(int argc, char** argv) {
  using namespace lookahead;
  CLI::App app{"Stub completion server for fetch tests"};
  std::string dataset, mode = "exact", policy = "uniform", host = "127.0.0.1";
  int port = 8080;
  StubConfig config;
  app.add_option("--dataset", dataset, "Dataset the mock mode answers from");
  app.add_option("--mode", mode, "exact | mock");
  app.add_option("--host", host);
  app.add_option("--port", port);
  app.add_option("--path", config.path, "Request path");
  app.add_option("--w,--chunk-width", config.mock.chunk_width);
  app.add_option("--L,--lookahead", config.mock.lookahead);
  app.add_option("--policy", policy, "uniform|low|high");
  app.add_option("--seed", config.mock.rng_seed);
  app.add_option("--fail-first", config.fail_first, "Reply 503 to this many requests first");
  CLI11_PARSE(app, argc, argv);

  try {
    config.mock.tie_break = parse_tie_break(policy);
    if (mode == "mock") {
      config.mode = StubMode::kMock;
      if (dataset.empty()) throw ValidationError("--mode mock needs --dataset");
    } else if (mode != "exact") {
      throw ValidationError("--mode must be exact or mock");
    }
    StubServer server(dataset.empty() ? std::vector<ProblemRecord>{} : read_dataset(dataset),
                      config);
    std::cerr << "serving on http://" << host << ":" << port << config.path << "\n";
    server.run(host, port);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
  return 0;
}
