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

// Local completion server used as a test fixture for the fetcher. It speaks
// the fetcher's default protocol: POST {"prompt": ...} and reply
// {"choices": [{"text": ...}]}.
//
// In exact mode it answers every query with the true sum. In mock mode it
// looks the query up in a dataset and answers with the mock model, seeded
// per record id exactly as batch_complete does.

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "lookahead/datasets.hpp"
#include "lookahead/mock_model.hpp"

namespace lookahead {

enum class StubMode { kExact, kMock };

struct StubConfig {
  StubMode mode = StubMode::kExact;
  MockModelConfig mock;
  std::string path = "/v1/completions";
  int fail_first = 0;  // answer this many requests with 503 first
};

/// Query portion of a prompt: text after the last "; " separator.
inline std::string query_of(const std::string& prompt) {
  const auto pos = prompt.rfind("; ");
  return pos == std::string::npos ? prompt : prompt.substr(pos + 2);
}

/// Parses "a + b + c = " into a problem.
inline std::optional<AdditionProblem> parse_query(const std::string& query) {
  static const std::regex number(R"(\d+)");
  const auto eq = query.find('=');
  if (eq == std::string::npos) return std::nullopt;
  const std::string lhs = query.substr(0, eq);
  std::vector<DigitString> operands;
  for (auto it = std::sregex_iterator(lhs.begin(), lhs.end(), number);
       it != std::sregex_iterator(); ++it) {
    operands.push_back(DigitString::parse(it->str()));
  }
  if (operands.size() < 2) return std::nullopt;
  return AdditionProblem(std::move(operands));
}

class StubServer {
 public:
  StubServer(std::vector<ProblemRecord> records, StubConfig config)
      : records_(std::move(records)), config_(std::move(config)) {
    for (std::size_t i = 0; i < records_.size(); ++i) by_query_[records_[i].prompt_zero] = i;
    server_.Post(config_.path, [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
  }

  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  ~StubServer() { stop(); }

  /// Binds to `port` (0 picks a free port), starts serving on a background
  /// thread and returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
    } else if (server_.bind_to_port(host, port)) {
      port_ = port;
    } else {
      port_ = -1;
    }
    if (port_ < 0) throw NetworkError("stub server cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Serves on the calling thread until stop() is called elsewhere.
  void run(const std::string& host, int port) {
    if (!server_.listen(host, port)) throw NetworkError("stub server cannot listen on port " + std::to_string(port));
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + config_.path;
  }

  std::size_t requests() const noexcept { return requests_; }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    const std::size_t n = requests_++;
    if (n < static_cast<std::size_t>(config_.fail_first)) {
      res.status = 503;
      res.set_content(R"({"error":"warming up"})", "application/json");
      return;
    }
    std::string prompt;
    try {
      prompt = nlohmann::json::parse(req.body).at("prompt").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      reply_error(res, 400, "request body needs a string 'prompt'");
      return;
    }
    const std::string query = query_of(prompt);
    std::string text;
    if (config_.mode == StubMode::kExact) {
      auto problem = parse_query(query);
      if (!problem) {
        reply_error(res, 400, "cannot parse query '" + query + "'");
        return;
      }
      text = exact_add(*problem).result().stripped().str();
    } else {
      auto it = by_query_.find(query);
      if (it == by_query_.end()) {
        reply_error(res, 404, "query not in dataset: '" + query + "'");
        return;
      }
      const auto& rec = records_[it->second];
      Rng rng(derive_seed(config_.mock.rng_seed, rec.id));
      text = complete(rec, config_.mock, rng).text;
    }
    nlohmann::json reply;
    reply["choices"] = nlohmann::json::array({{{"text", text}}});
    res.set_content(reply.dump(), "application/json");
  }

  static void reply_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
  }

  std::vector<ProblemRecord> records_;
  StubConfig config_;
  std::map<std::string, std::size_t> by_query_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace lookahead
