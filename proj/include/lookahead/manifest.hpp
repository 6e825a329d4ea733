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

// Run manifests: one manifest.jsonl per output directory, one line appended
// per command run.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lookahead/error.hpp"

namespace lookahead {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kManifestFile = "manifest.jsonl";

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct DatasetEntry {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string generator_version;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  std::vector<DatasetEntry> datasets;
  std::string started_at = utc_timestamp();
  std::string finished_at;
  std::vector<std::string> outputs;
  std::string status = "ok";
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["argv"] = argv;
    j["seed"] = seed;
    auto ds = nlohmann::ordered_json::array();
    for (const auto& d : datasets) {
      ds.push_back({{"name", d.name},
                    {"seed", d.seed},
                    {"count", d.count},
                    {"generator_version", d.generator_version}});
    }
    j["datasets"] = std::move(ds);
    j["artifact_version"] = kArtifactVersion;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outputs"] = outputs;
    j["status"] = status;
    if (!extra.empty()) j["extra"] = extra;
    return j;
  }
};

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create directory " + dir + ": " + ec.message());
}

inline void append_manifest(const std::string& dir, RunManifest manifest) {
  ensure_directory(dir);
  if (manifest.finished_at.empty()) manifest.finished_at = utc_timestamp();
  const auto path = (std::filesystem::path(dir) / kManifestFile).string();
  std::ofstream out(path, std::ios::app);
  if (!out) throw ValidationError("cannot append to " + path);
  out << manifest.to_json().dump() << '\n';
}

inline std::vector<nlohmann::json> read_manifest(const std::string& dir) {
  std::vector<nlohmann::json> out;
  std::ifstream in((std::filesystem::path(dir) / kManifestFile).string());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

}  // namespace lookahead
