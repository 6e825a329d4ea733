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

// Completion fetcher for HTTP JSON endpoints.
//
// Each record's prompt is written into the request body at `prompt_field`
// (a JSON pointer) and the completion is read from the response at
// `completion_field`. Completions are appended to completions.jsonl as they
// arrive and every response body is archived in raw_responses.jsonl, so an
// interrupted run resumes by skipping ids already present in the output.
// Connection failures, 429 and 5xx responses are retried with exponential
// backoff; other statuses fail immediately.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "lookahead/datasets.hpp"
#include "lookahead/mock_model.hpp"

namespace lookahead {

inline constexpr const char* kCompletionsFile = "completions.jsonl";
inline constexpr const char* kRawResponsesFile = "raw_responses.jsonl";

struct FetchConfig {
  std::string endpoint;                 // http://host:port/path
  std::optional<std::string> auth_env;  // env var holding a bearer token
  std::optional<std::string> model;     // optional "model" body field
  double temperature = 0.1;
  int max_tokens = 8;
  double rate_limit = 0.0;  // requests per second, 0 = unlimited
  int concurrency = 1;      // in-flight requests
  int max_attempts = 5;
  int backoff_ms = 500;  // delay before the second attempt, doubled each retry
  int timeout_ms = 30000;
  PromptMode prompt_mode = PromptMode::kZeroShot;
  std::string prompt_field = "/prompt";
  std::string completion_field = "/choices/0/text";
  std::string temperature_field = "/temperature";
  std::string max_tokens_field = "/max_tokens";
};

struct FetchSummary {
  std::size_t fetched = 0;
  std::size_t resumed = 0;  // already present before this run
  std::size_t retries = 0;
};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw ValidationError("endpoint must be an http:// URL, got '" + url + "'");
  }
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

inline std::string prompt_for(const ProblemRecord& record, PromptMode mode) {
  if (mode == PromptMode::kOneShot) {
    if (!record.prompt_one) throw ValidationError("record " + record.id + " has no one-shot prompt");
    return *record.prompt_one;
  }
  return record.prompt_zero;
}

namespace detail {

class RateLimiter {
 public:
  explicit RateLimiter(double per_second) : per_second_(per_second) {}

  void wait() {
    if (per_second_ <= 0) return;
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      next_ = std::max(next_, now);
      slot = next_;
      next_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / per_second_));
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  double per_second_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

inline std::set<std::string> completed_ids(const std::string& path) {
  std::set<std::string> ids;
  std::ifstream in(path);
  if (!in) return ids;
  // A run killed mid-write can leave a partial last line; it is dropped.
  std::string line;
  while (std::getline(in, line)) {
    try {
      auto j = nlohmann::json::parse(line);
      if (j.contains("id") && j.contains("completion")) ids.insert(j["id"].get<std::string>());
    } catch (const nlohmann::json::exception&) {
    }
  }
  return ids;
}

}  // namespace detail

inline nlohmann::json build_request(const FetchConfig& config, const std::string& prompt) {
  nlohmann::json body = nlohmann::json::object();
  body[nlohmann::json::json_pointer(config.prompt_field)] = prompt;
  body[nlohmann::json::json_pointer(config.temperature_field)] = config.temperature;
  body[nlohmann::json::json_pointer(config.max_tokens_field)] = config.max_tokens;
  if (config.model) body["model"] = *config.model;
  return body;
}

/// Fetches a completion for every record not already in out_dir. Throws
/// NetworkError once a record exhausts its attempts; completions received
/// before that stay on disk.
inline FetchSummary fetch_completions(const std::vector<ProblemRecord>& records,
                                      const FetchConfig& config, const std::string& out_dir) {
  if (config.max_attempts < 1) throw ValidationError("max attempts must be >= 1");
  if (config.concurrency < 1) throw ValidationError("concurrency must be >= 1");
  const auto endpoint = parse_endpoint(config.endpoint);
  std::filesystem::create_directories(out_dir);
  const auto completions_path = (std::filesystem::path(out_dir) / kCompletionsFile).string();
  const auto raw_path = (std::filesystem::path(out_dir) / kRawResponsesFile).string();

  httplib::Headers headers;
  if (config.auth_env) {
    const char* token = std::getenv(config.auth_env->c_str());
    if (token == nullptr || *token == '\0') {
      throw ValidationError("auth token variable " + *config.auth_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const auto done = detail::completed_ids(completions_path);
  std::vector<const ProblemRecord*> todo;
  for (const auto& r : records) {
    if (!done.contains(r.id)) todo.push_back(&r);
  }
  FetchSummary summary;
  summary.resumed = records.size() - todo.size();

  std::ofstream completions(completions_path, std::ios::app);
  std::ofstream raw(raw_path, std::ios::app);
  if (!completions || !raw) throw ValidationError("cannot open outputs in " + out_dir);

  std::mutex out_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::atomic<std::size_t> retries{0}, fetched{0};
  std::string failure;
  detail::RateLimiter limiter(config.rate_limit);

  auto worker = [&] {
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(std::chrono::milliseconds(config.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(config.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(config.timeout_ms));
    while (!failed) {
      const std::size_t i = next++;
      if (i >= todo.size()) return;
      const auto& rec = *todo[i];
      const auto body = build_request(config, prompt_for(rec, config.prompt_mode)).dump();
      std::string error;
      int delay = config.backoff_ms;
      for (int attempt = 1; attempt <= config.max_attempts && !failed; ++attempt) {
        if (attempt > 1) {
          ++retries;
          std::this_thread::sleep_for(std::chrono::milliseconds(delay));
          delay *= 2;
        }
        limiter.wait();
        auto res = client.Post(endpoint.path, headers, body, "application/json");
        bool retryable = true;
        if (!res) {
          error = "request failed: " + httplib::to_string(res.error());
        } else {
          {
            std::lock_guard lock(out_mu);
            nlohmann::ordered_json archived;
            archived["id"] = rec.id;
            archived["attempt"] = attempt;
            archived["status"] = res->status;
            archived["body"] = res->body;
            raw << archived.dump() << '\n' << std::flush;
          }
          if (res->status == 200) {
            try {
              const auto reply = nlohmann::json::parse(res->body);
              const auto& text = reply.at(nlohmann::json::json_pointer(config.completion_field));
              nlohmann::ordered_json line;
              line["id"] = rec.id;
              line["completion"] = text.get<std::string>();
              std::lock_guard lock(out_mu);
              completions << line.dump() << '\n' << std::flush;
              ++fetched;
              error.clear();
              break;
            } catch (const nlohmann::json::exception& e) {
              error = std::string("malformed response: ") + e.what();
              retryable = false;
            }
          } else {
            error = "HTTP " + std::to_string(res->status);
            retryable = res->status == 429 || res->status >= 500;
          }
        }
        if (!retryable) break;
      }
      if (!error.empty()) {
        std::lock_guard lock(out_mu);
        if (!failed.exchange(true)) failure = "record " + rec.id + ": " + error;
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 1; t < config.concurrency; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  summary.fetched = fetched;
  summary.retries = retries;
  if (failed) {
    throw NetworkError(failure + " (" + std::to_string(summary.resumed + summary.fetched) + " of " +
                       std::to_string(records.size()) + " completions saved; rerun to resume)");
  }
  return summary;
}

}  // namespace lookahead
