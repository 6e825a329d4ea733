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

#include "lookahead/mock_model.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace lookahead {
namespace {

ProblemRecord record_of(std::vector<std::uint64_t> values, std::string id = "r-0") {
  ScenarioSpec spec;
  spec.tag = "TEST";
  return detail::make_record(std::move(id), spec, AdditionProblem::from_ints(values));
}

std::string heuristic_text(const ProblemRecord& rec, const HeuristicConfig& config, Rng& rng) {
  const auto result = heuristic_add(rec.problem, config, rng).result();
  // The top slot is a determined zero when the truth is no wider than the operands.
  return rec.truth.size() > rec.problem.width() ? result.str() : result.str().substr(1);
}

TEST(ChunkLayoutTest, RightAligned) {
  auto c = chunk_layout(6, 3);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].lo, 3u);
  EXPECT_EQ(c[0].hi, 6u);
  EXPECT_EQ(c[1].lo, 0u);
  EXPECT_EQ(c[1].hi, 2u);
  c = chunk_layout(3, 1);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].lo, 3u);
  EXPECT_EQ(c[3].lo, 0u);
  c = chunk_layout(4, 3);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].lo, 3u);
  EXPECT_EQ(c[0].hi, 4u);
}

TEST(MockModelTest, ConfigValidation) {
  Rng rng(0);
  MockModelConfig bad;
  bad.chunk_width = 0;
  EXPECT_THROW(complete(record_of({1, 2}), bad, rng), ValidationError);
  bad = {};
  bad.lookahead = 0;
  EXPECT_THROW(complete(record_of({1, 2}), bad, rng), ValidationError);
}

TEST(MockModelTest, WorkedExamples) {
  MockModelConfig w3{.chunk_width = 3};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(complete(record_of({111234, 111514}), w3, rng).text, "222748");
    Rng rng1(seed);
    EXPECT_EQ(complete(record_of({147, 293}), {}, rng1).text.front(), '4');
  }
  int high = 0;
  const int n = 2000;
  for (int seed = 0; seed < n; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    const auto c = complete(record_of({111382, 111634}), w3, rng);
    ASSERT_TRUE(c.text == "223016" || c.text == "222016") << c.text;
    EXPECT_EQ(c.ambiguous_positions, std::vector<std::size_t>{3});
    high += c.text == "223016";
  }
  EXPECT_NEAR(static_cast<double>(high) / n, 0.5, 0.05);
}

TEST(MockModelTest, ReducesToHeuristicAdd) {
  std::mt19937_64 gen(17);
  for (int iter = 0; iter < 5000; ++iter) {
    const std::size_t k = 2 + gen() % 10;
    std::vector<std::uint64_t> values(k);
    for (auto& v : values) v = gen() % 100000;
    const auto rec = record_of(values);
    const std::uint64_t seed = gen();
    for (auto policy : {TieBreak::kUniformRandom, TieBreak::kAlwaysLow, TieBreak::kAlwaysHigh}) {
      Rng a(seed), b(seed);
      MockModelConfig mc{.tie_break = policy};
      HeuristicConfig hc{.tie_break = policy};
      ASSERT_EQ(complete(rec, mc, a).text, heuristic_text(rec, hc, b));
    }
  }
}

TEST(MockModelTest, FullLookaheadIsExact) {
  std::mt19937_64 gen(18);
  for (int iter = 0; iter < 3000; ++iter) {
    const std::size_t k = 2 + gen() % 10;
    const std::size_t d = 1 + gen() % 7;
    std::uint64_t limit = 1;
    for (std::size_t i = 0; i < d; ++i) limit *= 10;
    std::vector<std::uint64_t> values(k);
    for (auto& v : values) v = gen() % limit;
    const auto rec = record_of(values);
    MockModelConfig config{.chunk_width = 1 + static_cast<int>(gen() % 4),
                           .lookahead = static_cast<int>(rec.problem.width())};
    Rng rng(gen());
    ASSERT_EQ(complete(rec, config, rng).text, rec.truth.str());
  }
}

TEST(MockModelTest, ChunkMaskingOnSixDigits) {
  std::mt19937_64 gen(19);
  MockModelConfig w3{.chunk_width = 3};
  for (int iter = 0; iter < 3000; ++iter) {
    const auto rec = record_of({100000 + gen() % 800000, 100000 + gen() % 800000});
    Rng rng(gen());
    const auto c = complete(rec, w3, rng);
    for (auto p : c.ambiguous_positions) ASSERT_EQ(p, 3u);
    // Everything below the chunk boundary is exact.
    ASSERT_EQ(c.text.substr(c.text.size() - 3), rec.truth.str().substr(rec.truth.size() - 3));
  }
}

TEST(MockModelTest, AccuracyMonotoneInLookahead) {
  std::mt19937_64 gen(20);
  std::vector<ProblemRecord> records;
  for (int i = 0; i < 500; ++i) {
    std::vector<std::uint64_t> values(2 + gen() % 4);
    for (auto& v : values) v = gen() % 10000;
    records.push_back(record_of(values, "r-" + std::to_string(i)));
  }
  // Per record, per position: once the lookahead window determines a digit it
  // stays determined and correct.
  for (const auto& rec : records) {
    bool was_exact = false;
    for (int L = 1; L <= 5; ++L) {
      MockModelConfig c{.lookahead = L, .tie_break = TieBreak::kAlwaysLow};
      Rng rng(0);
      const bool exact = complete(rec, c, rng).text == rec.truth.str();
      ASSERT_TRUE(!was_exact || exact);
      was_exact = exact;
    }
  }
}

TEST(BatchCompleteTest, ScenarioAmbiguity) {
  MockModelConfig config;
  for (const auto& p : batch_complete(gen_scenario("DS1", 100, 5), config)) {
    EXPECT_TRUE(p.ambiguous_positions->empty()) << p.id;
  }
  for (const auto& p : batch_complete(gen_scenario("DS5", 100, 5), config)) {
    EXPECT_EQ(*p.ambiguous_positions, std::vector<std::size_t>{2}) << p.id;
  }
  EXPECT_TRUE(batch_complete({}, config).empty());
  EXPECT_EQ(predictions_to_jsonl({}), "");
}

TEST(BatchCompleteTest, DeterministicAndRoundTrips) {
  const auto records = gen_multi_operand(3, 300, 4);
  MockModelConfig config{.rng_seed = 77};
  const auto a = predictions_to_jsonl(batch_complete(records, config));
  EXPECT_EQ(a, predictions_to_jsonl(batch_complete(records, config)));
  std::istringstream in(a);
  EXPECT_EQ(predictions_to_jsonl(read_predictions(in)), a);
  std::istringstream bad("{\"id\":\"x\"}\n");
  EXPECT_THROW(read_predictions(bad), ParseError);
}

}  // namespace
}  // namespace lookahead
