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

#include "lookahead/datasets.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "lookahead/heuristic.hpp"

namespace lookahead {
namespace {

ProblemRecord record_of(std::initializer_list<std::uint64_t> values, const std::string& name) {
  return detail::make_record("test-0", scenario_spec(name), AdditionProblem::from_ints(values));
}

bool passes(std::initializer_list<std::uint64_t> values, const std::string& name) {
  return check_constraints(record_of(values, name), scenario_spec(name)).empty();
}

TEST(ScenarioSpecTest, UnknownName) {
  EXPECT_THROW(scenario_spec("DS9"), ValidationError);
  EXPECT_THROW(multi_operand_spec(12), ValidationError);
  EXPECT_THROW(multi_operand_spec(1), ValidationError);
}

TEST(CheckConstraintsTest, WorkedExamples) {
  EXPECT_TRUE(passes({246, 155}, "DS3"));
  EXPECT_TRUE(passes({111721, 111435}, "DS7"));
  EXPECT_TRUE(passes({111382, 111634}, "DS8"));
  EXPECT_TRUE(passes({236, 125}, "DS2"));
  EXPECT_TRUE(passes({231, 124}, "DS1"));
  const auto violations = check_constraints(record_of({246, 155}, "DS2"), scenario_spec("DS2"));
  EXPECT_EQ(violations, std::vector<std::string>{"c_2 != 0"});
}

TEST(CheckConstraintsTest, DigitSumsOfScenarioEight) {
  const auto tr = exact_add(AdditionProblem::from_ints({111382, 111634}));
  EXPECT_EQ(tr.digit_sum[1], 11);
  EXPECT_EQ(tr.digit_sum[2], 9);
  EXPECT_EQ(tr.result().stripped().str(), "223016");
}

TEST(CheckConstraintsTest, RangeAndTruth) {
  auto rec = record_of({50, 155}, "DS1");
  EXPECT_FALSE(check_constraints(rec, scenario_spec("DS1")).empty());
  rec = record_of({231, 124}, "DS1");
  rec.truth = DigitString::parse("356");
  EXPECT_FALSE(check_constraints(rec, scenario_spec("DS1")).empty());
  rec = record_of({231, 124}, "DS1");
  EXPECT_FALSE(check_constraints(rec, scenario_spec("DS6")).empty());
}

class ScenarioGenerationTest : public ::testing::TestWithParam<std::string> {};

TEST_P(ScenarioGenerationTest, ValidUniqueDeterministic) {
  const auto spec = scenario_spec(GetParam());
  const auto records = generate(spec, 100, 42);
  ASSERT_EQ(records.size(), 100u);
  std::set<std::string> ids;
  std::set<std::vector<std::uint64_t>> tuples;
  for (const auto& r : records) {
    EXPECT_TRUE(check_constraints(r, spec).empty()) << r.id;
    EXPECT_EQ(r.scenario, GetParam());
    ids.insert(r.id);
    tuples.insert(r.problem.values());
  }
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_EQ(tuples.size(), 100u);
  EXPECT_EQ(to_jsonl(generate(spec, 100, 42)), to_jsonl(records));
  EXPECT_NE(to_jsonl(generate(spec, 100, 43)), to_jsonl(records));
}

INSTANTIATE_TEST_SUITE_P(AllScenarios, ScenarioGenerationTest,
                         ::testing::ValuesIn(scenario_names()));

TEST(ScenarioGenerationTest, SetsAreDisjoint) {
  for (const auto& name : scenario_names()) {
    for (const auto& r : gen_scenario(name, 100, 7)) {
      for (const auto& other : scenario_names()) {
        if (other == name) continue;
        EXPECT_FALSE(check_constraints(r, scenario_spec(other)).empty())
            << r.id << " also satisfies " << other;
      }
    }
  }
}

TEST(ScenarioGenerationTest, DeterminacyPartition) {
  const std::map<std::string, Determinacy> expected{
      {"DS1", Determinacy::kDetermined}, {"DS2", Determinacy::kDetermined},
      {"DS3", Determinacy::kAmbiguous},  {"DS4", Determinacy::kDetermined},
      {"DS5", Determinacy::kAmbiguous}};
  for (const auto& [name, want] : expected) {
    for (const auto& r : gen_scenario(name, 100, 3)) {
      EXPECT_EQ(classify_position(r.problem, 2), want) << r.id;
    }
  }
}

TEST(MultiOperandTest, RangesAndPrompts) {
  for (std::size_t k = 2; k <= 11; ++k) {
    const auto spec = multi_operand_spec(k);
    const auto records = generate(spec, 300, 42);
    for (const auto& r : records) {
      ASSERT_TRUE(check_constraints(r, spec).empty()) << r.id;
      ASSERT_EQ(r.problem.k(), k);
      ASSERT_TRUE(r.prompt_one.has_value());
      ASSERT_NE(*r.exemplar_id, r.id);
      ASSERT_TRUE(r.prompt_one->ends_with("; " + r.prompt_zero));
    }
    if (k == 2) {
      for (const auto& r : records) {
        const auto v = digits_to_int(r.truth);
        ASSERT_GE(v, 200u);
        ASSERT_LE(v, 999u);
      }
    }
  }
}

TEST(MultiOperandTest, ExhaustionIsReported) {
  auto spec = multi_operand_spec(2);
  spec.operand_min = 100;
  spec.operand_max = 101;
  EXPECT_THROW(generate(spec, 5, 1), GenerationExhaustedError);
}

TEST(RenderPromptTest, Templates) {
  const auto query = record_of({147, 255}, "DS3");
  const auto exemplar = record_of({359, 276}, "DS3");
  EXPECT_EQ(render_prompt(query, PromptMode::kZeroShot), "147 + 255 = ");
  EXPECT_EQ(render_prompt(query, PromptMode::kOneShot, &exemplar),
            "359 + 276 = 635; 147 + 255 = ");
  EXPECT_THROW(render_prompt(query, PromptMode::kOneShot, &query), ValidationError);
  EXPECT_THROW(render_prompt(query, PromptMode::kOneShot), ValidationError);
  EXPECT_EQ(render_query(AdditionProblem::from_ints({251, 613, 392, 137})),
            "251 + 613 + 392 + 137 = ");
}

TEST(JsonlTest, RoundTrip) {
  const auto records = gen_multi_operand(3, 5000, 9);
  const auto text = to_jsonl(records);
  std::istringstream in(text);
  const auto back = read_dataset(in);
  ASSERT_EQ(back.size(), records.size());
  EXPECT_EQ(to_jsonl(back), text);
  const auto path = (std::filesystem::temp_directory_path() / "lookahead_rt.jsonl").string();
  write_dataset(back, path);
  EXPECT_EQ(read_text(path), text);
  std::filesystem::remove(path);
}

TEST(JsonlTest, EmptyInput) {
  std::istringstream in("");
  EXPECT_TRUE(read_dataset(in).empty());
}

TEST(JsonlTest, MissingFieldNamesFieldAndLine) {
  auto j = record_to_json(record_of({231, 124}, "DS1"));
  j.erase("truth");
  std::istringstream in(record_to_json(record_of({231, 124}, "DS1")).dump() + "\n" + j.dump() +
                        "\n");
  try {
    read_dataset(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("truth"), std::string::npos);
  }
}

TEST(JsonlTest, RejectsWrongTruthAndBadJson) {
  auto j = record_to_json(record_of({231, 124}, "DS1"));
  j["truth"] = "356";
  std::istringstream wrong(j.dump() + "\n");
  EXPECT_THROW(read_dataset(wrong), ParseError);
  std::istringstream bad("{not json\n");
  EXPECT_THROW(read_dataset(bad), ParseError);
}

}  // namespace
}  // namespace lookahead
