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

// A completion emitter that follows the limited-lookahead heuristic exactly.
//
// The result is emitted in chunks of `chunk_width` digits, most significant
// first. Chunks are right-aligned over the operand width d; for widths above
// one the final-carry slot s_d joins the most significant chunk. Each chunk
// estimates only the carry entering its lowest position, from the
// `lookahead` digit sums below it, then adds exactly inside the chunk.
// With chunk_width = 1 and lookahead = 1 this reduces to heuristic_add.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lookahead/datasets.hpp"
#include "lookahead/heuristic.hpp"

namespace lookahead {

struct MockModelConfig {
  int chunk_width = 1;
  int lookahead = 1;
  TieBreak tie_break = TieBreak::kUniformRandom;
  std::uint64_t rng_seed = 0;
  bool exact_at_boundary = true;

  void validate() const {
    if (chunk_width < 1) throw ValidationError("chunk width must be >= 1");
    if (lookahead < 1) throw ValidationError("lookahead must be >= 1");
  }
};

struct Chunk {
  std::size_t lo = 0;  // lowest position, inclusive
  std::size_t hi = 0;  // highest position, inclusive
};

/// Chunks covering positions 0..width, most significant first.
inline std::vector<Chunk> chunk_layout(std::size_t width, int chunk_width) {
  const auto w = static_cast<std::size_t>(chunk_width);
  std::vector<Chunk> chunks;
  for (std::size_t lo = 0; lo < width; lo += w) {
    chunks.push_back({lo, std::min(lo + w, width) - 1});
  }
  if (w > 1 && !chunks.empty()) {
    chunks.back().hi = width;
  } else {
    chunks.push_back({width, width});
  }
  return {chunks.rbegin(), chunks.rend()};
}

struct MockCompletion {
  std::string text;
  std::vector<std::size_t> ambiguous_positions;  // chunk boundaries, descending
};

inline MockCompletion complete(const ProblemRecord& record, const MockModelConfig& config,
                               Rng& rng) {
  config.validate();
  const auto& problem = record.problem;
  const auto sums = digit_sums(problem);
  const std::size_t d = problem.width();
  const int base = problem.base();

  MockCompletion out;
  std::vector<int> digit(d, 0);
  int top_total = 0;
  // Result length is known: the s_d slot exists only for wider results.
  const bool top_slot = record.truth.stripped().size() > d;
  for (const auto& chunk : chunk_layout(d, config.chunk_width)) {
    if (chunk.lo == d && !top_slot) continue;
    CarryEstimate est = chunk.lo == 0
                            ? CarryEstimate::determined(0, 0)
                            : bracket_carry_L(sums, problem.k(), chunk.lo, config.lookahead,
                                              base, config.exact_at_boundary);
    if (est.is_ambiguous()) out.ambiguous_positions.push_back(chunk.lo);
    int carry = resolve(est, config.tie_break, rng);
    for (std::size_t p = chunk.lo; p <= chunk.hi; ++p) {
      const int total = (p < d ? sums[p] : 0) + carry;
      if (p == d) {
        top_total = total;
      } else {
        digit[p] = total % base;
        carry = total / base;
      }
    }
  }

  if (top_slot) {
    out.text = int_to_digits(static_cast<std::uint64_t>(top_total), base).str();
  }
  for (std::size_t p = d; p-- > 0;) out.text += DigitString({digit[p]}, base).str();
  return out;
}

struct Prediction {
  std::string id;
  std::string completion;
  std::optional<std::vector<std::size_t>> ambiguous_positions;
};

/// One prediction per record; record r uses derive_seed(config.rng_seed, r.id).
inline std::vector<Prediction> batch_complete(const std::vector<ProblemRecord>& records,
                                              const MockModelConfig& config) {
  config.validate();
  std::vector<Prediction> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    Rng rng(derive_seed(config.rng_seed, rec.id));
    auto c = complete(rec, config, rng);
    out.push_back({rec.id, std::move(c.text), std::move(c.ambiguous_positions)});
  }
  return out;
}

inline std::string predictions_to_jsonl(const std::vector<Prediction>& preds) {
  std::string out;
  for (const auto& p : preds) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["completion"] = p.completion;
    if (p.ambiguous_positions) j["ambiguous_positions"] = *p.ambiguous_positions;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> preds;
  detail::for_each_jsonl(in, [&](const nlohmann::json& j, std::size_t line) {
    Prediction p;
    p.id = detail::string_field(j, "id", line);
    p.completion = detail::string_field(j, "completion", line);
    if (auto it = j.find("ambiguous_positions"); it != j.end() && !it->is_null()) {
      try {
        p.ambiguous_positions = it->get<std::vector<std::size_t>>();
      } catch (const nlohmann::json::exception&) {
        throw ParseError(line, "field 'ambiguous_positions' is not an integer array");
      }
    }
    preds.push_back(std::move(p));
  });
  return preds;
}

inline std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open predictions " + path);
  return read_predictions(in);
}

}  // namespace lookahead
