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

// Problem sets: the 2..11-operand sets and the carry-scenario sets DS1..DS8,
// their constraint checkers, prompt rendering, and JSON-lines persistence.
//
// Every scenario constraint is a predicate over the ExactTrace, so the
// checker re-derives the trace from the operands and never trusts the
// generator.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lookahead/core_arith.hpp"
#include "lookahead/rng.hpp"

namespace lookahead {

inline constexpr std::size_t kDefaultMultiCount = 5000;
inline constexpr std::size_t kDefaultScenarioCount = 100;
inline constexpr std::uint64_t kAttemptCapPerRecord = 1'000'000;
inline constexpr const char* kGeneratorVersion = "1";

struct ProblemRecord {
  std::string id;
  std::string scenario;
  AdditionProblem problem;
  DigitString truth;  // exact sum, leading zeros stripped
  std::string prompt_zero;
  std::optional<std::string> prompt_one;
  std::optional<std::string> exemplar_id;
};

using TracePredicate = std::function<void(const ExactTrace&, std::vector<std::string>&)>;

struct ScenarioSpec {
  std::string name;       // file stem, e.g. "multi_k4" or "DS5"
  std::string tag;        // scenario tag, e.g. "MULTI_K4" or "DS5"
  std::size_t operands = 2;
  std::uint64_t operand_min = 100;
  std::uint64_t operand_max = 899;
  std::optional<std::uint64_t> result_min;
  std::optional<std::uint64_t> result_max;
  std::size_t default_count = kDefaultScenarioCount;
  TracePredicate constraint;  // appends violations; empty means none
  bool one_shot = false;      // render one-shot prompts as well
};

namespace detail {

inline void require(bool ok, std::vector<std::string>& out, std::string message) {
  if (!ok) out.push_back(std::move(message));
}

inline std::string sub(const char* symbol, std::size_t i) {
  return std::string(symbol) + "_" + std::to_string(i);
}

// No carry at any position except those listed, and no digit sum of 9
// except at the positions listed.
inline void clean_elsewhere(const ExactTrace& tr, std::vector<std::string>& out,
                            std::set<std::size_t> carry_ok, std::set<std::size_t> nine_ok) {
  for (std::size_t i = 1; i < tr.carry.size(); ++i) {
    if (!carry_ok.contains(i)) require(tr.carry[i] == 0, out, sub("c", i) + " != 0");
  }
  for (std::size_t i = 0; i < tr.digit_sum.size(); ++i) {
    if (!nine_ok.contains(i)) require(tr.digit_sum[i] != 9, out, sub("t", i) + " == 9");
  }
}

}  // namespace detail

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"DS1", "DS2", "DS3", "DS4",
                                              "DS5", "DS6", "DS7", "DS8"};
  return names;
}

inline ScenarioSpec multi_operand_spec(std::size_t k) {
  if (k < 2 || k > 11) {
    throw ValidationError("multi-operand sets cover k in [2, 11], got " + std::to_string(k));
  }
  ScenarioSpec spec;
  spec.name = "multi_k" + std::to_string(k);
  spec.tag = "MULTI_K" + std::to_string(k);
  spec.operands = k;
  spec.default_count = kDefaultMultiCount;
  spec.one_shot = true;
  if (k == 2) {
    spec.result_min = 200;
    spec.result_max = 999;
  }
  return spec;
}

inline ScenarioSpec scenario_spec(const std::string& name) {
  using detail::require;
  ScenarioSpec spec;
  spec.name = name;
  spec.tag = name;
  spec.result_min = 200;
  spec.result_max = 999;
  if (name == "DS1") {
    spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
      require(tr.carry[1] == 0, out, "c_1 != 0");
      require(tr.carry[2] == 0, out, "c_2 != 0");
      require(tr.digit_sum[1] != 9, out, "t_1 == 9");
    };
  } else if (name == "DS2") {
    spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
      require(tr.carry[1] == 1, out, "c_1 != 1");
      require(tr.carry[2] == 0, out, "c_2 != 0");
    };
  } else if (name == "DS3") {
    spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
      require(tr.carry[1] == 1, out, "c_1 != 1");
      require(tr.digit_sum[1] == 9, out, "t_1 != 9");
    };
  } else if (name == "DS4") {
    spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
      require(tr.digit_sum[1] >= 10, out, "t_1 < 10");
      require(tr.carry[1] == 0, out, "c_1 != 0");
    };
  } else if (name == "DS5") {
    spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
      require(tr.carry[1] == 0, out, "c_1 != 0");
      require(tr.carry[2] == 0, out, "c_2 != 0");
      require(tr.digit_sum[1] == 9, out, "t_1 != 9");
    };
  } else if (name == "DS6" || name == "DS7" || name == "DS8") {
    spec.operand_min = 100'000;
    spec.operand_max = 899'999;
    spec.result_min = 200'000;
    spec.result_max = 999'999;
    if (name == "DS6") {
      spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
        detail::clean_elsewhere(tr, out, {}, {});
      };
    } else if (name == "DS7") {
      spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
        require(tr.digit_sum[2] >= 10, out, "t_2 < 10");
        detail::clean_elsewhere(tr, out, {3}, {});
      };
    } else {
      spec.constraint = [](const ExactTrace& tr, std::vector<std::string>& out) {
        require(tr.digit_sum[1] >= 10, out, "t_1 < 10");
        require(tr.digit_sum[2] == 9, out, "t_2 != 9");
        detail::clean_elsewhere(tr, out, {2, 3}, {2});
      };
    }
  } else {
    throw ValidationError("unknown scenario '" + name + "' (expected DS1..DS8)");
  }
  return spec;
}

/// Checks a record against a spec. Returns the list of violations; empty
/// means the record passes.
inline std::vector<std::string> check_constraints(const ProblemRecord& record,
                                                  const ScenarioSpec& spec) {
  std::vector<std::string> out;
  const auto& problem = record.problem;
  if (problem.k() != spec.operands) {
    out.push_back("expected " + std::to_string(spec.operands) + " operands, got " +
                  std::to_string(problem.k()));
    return out;
  }
  std::uint64_t sum = 0;
  for (auto v : problem.values()) {
    sum += v;
    if (v < spec.operand_min || v > spec.operand_max) {
      out.push_back("operand " + std::to_string(v) + " outside [" +
                    std::to_string(spec.operand_min) + ", " + std::to_string(spec.operand_max) +
                    "]");
    }
  }
  if (spec.result_min && sum < *spec.result_min) {
    out.push_back("result " + std::to_string(sum) + " < " + std::to_string(*spec.result_min));
  }
  if (spec.result_max && sum > *spec.result_max) {
    out.push_back("result " + std::to_string(sum) + " > " + std::to_string(*spec.result_max));
  }
  const auto trace = exact_add(problem);
  if (trace.result().stripped() != record.truth.stripped()) {
    out.push_back("truth " + record.truth.str() + " != exact sum " +
                  trace.result().stripped().str());
  }
  if (spec.constraint && out.empty()) spec.constraint(trace, out);
  return out;
}

/// Zero-shot query: "a + b + c = ". Operands are rendered without padding.
inline std::string render_query(const AdditionProblem& problem) {
  std::string out;
  for (std::size_t j = 0; j < problem.k(); ++j) {
    if (j) out += " + ";
    out += problem.operands()[j].stripped().str();
  }
  out += " = ";
  return out;
}

enum class PromptMode { kZeroShot, kOneShot };

/// One-shot form is "q1 r1; q2 " with the exemplar's query and result first.
inline std::string render_prompt(const ProblemRecord& record, PromptMode mode,
                                 const ProblemRecord* exemplar = nullptr) {
  if (mode == PromptMode::kZeroShot) return render_query(record.problem);
  if (exemplar == nullptr) throw ValidationError("one-shot prompt needs an exemplar");
  if (exemplar->problem.values() == record.problem.values()) {
    throw ValidationError("exemplar " + exemplar->id + " is the query itself");
  }
  return render_query(exemplar->problem) + exemplar->truth.stripped().str() + "; " +
         render_query(record.problem);
}

namespace detail {

inline ProblemRecord make_record(std::string id, const ScenarioSpec& spec,
                                 AdditionProblem problem) {
  auto truth = exact_add(problem).result().stripped();
  std::string prompt = render_query(problem);
  return ProblemRecord{std::move(id), spec.tag, std::move(problem), std::move(truth),
                       std::move(prompt), std::nullopt, std::nullopt};
}

inline std::string record_id(const std::string& name, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", index);
  return name + "-" + buf;
}

// Exemplars are drawn uniformly from the other records of the same set.
inline void attach_exemplars(std::vector<ProblemRecord>& records, std::uint64_t seed,
                             const std::string& name) {
  if (records.size() < 2) return;
  Rng rng(derive_seed(seed, name + "/exemplar"));
  for (std::size_t j = 0; j < records.size(); ++j) {
    auto pick = static_cast<std::size_t>(uniform_below(rng, records.size() - 1));
    if (pick >= j) ++pick;
    records[j].exemplar_id = records[pick].id;
    records[j].prompt_one = render_prompt(records[j], PromptMode::kOneShot, &records[pick]);
  }
}

}  // namespace detail

/// Rejection-samples `n` unique operand tuples uniformly from the spec's
/// operand range, keeping those that satisfy its range and trace
/// constraints. Throws GenerationExhaustedError after kAttemptCapPerRecord
/// consecutive rejections.
inline std::vector<ProblemRecord> generate(const ScenarioSpec& spec, std::size_t n,
                                           std::uint64_t seed) {
  Rng rng(derive_seed(seed, spec.name));
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<ProblemRecord> records;
  records.reserve(n);
  std::uint64_t attempts = 0;
  std::vector<std::uint64_t> values(spec.operands);
  while (records.size() < n) {
    if (++attempts > kAttemptCapPerRecord) {
      throw GenerationExhaustedError(spec.name + ": no new record after " +
                                     std::to_string(kAttemptCapPerRecord) + " attempts (" +
                                     std::to_string(records.size()) + " of " +
                                     std::to_string(n) + " generated)");
    }
    for (auto& v : values) v = uniform_between(rng, spec.operand_min, spec.operand_max);
    if (seen.contains(values)) continue;
    auto problem = AdditionProblem::from_ints(values);
    auto record = detail::make_record(detail::record_id(spec.name, records.size()), spec,
                                      std::move(problem));
    if (!check_constraints(record, spec).empty()) continue;
    seen.insert(values);
    records.push_back(std::move(record));
    attempts = 0;
  }
  if (spec.one_shot) detail::attach_exemplars(records, seed, spec.name);
  return records;
}

inline std::vector<ProblemRecord> gen_multi_operand(std::size_t k,
                                                    std::size_t n = kDefaultMultiCount,
                                                    std::uint64_t seed = 0) {
  return generate(multi_operand_spec(k), n, seed);
}

inline std::vector<ProblemRecord> gen_scenario(const std::string& name,
                                               std::size_t n = kDefaultScenarioCount,
                                               std::uint64_t seed = 0) {
  return generate(scenario_spec(name), n, seed);
}

/// Resolves a scenario tag ("DS3", "MULTI_K4") back to its spec.
inline ScenarioSpec spec_for_tag(const std::string& tag) {
  if (tag.rfind("MULTI_K", 0) == 0) {
    return multi_operand_spec(static_cast<std::size_t>(std::stoul(tag.substr(7))));
  }
  return scenario_spec(tag);
}

// JSON-lines persistence ----------------------------------------------------

inline nlohmann::ordered_json record_to_json(const ProblemRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["scenario"] = r.scenario;
  auto ops = nlohmann::ordered_json::array();
  for (const auto& op : r.problem.operands()) ops.push_back(op.stripped().str());
  j["operands"] = std::move(ops);
  j["truth"] = r.truth.str();
  j["prompt_zero"] = r.prompt_zero;
  j["prompt_one"] = r.prompt_one ? nlohmann::ordered_json(*r.prompt_one) : nullptr;
  j["exemplar_id"] = r.exemplar_id ? nlohmann::ordered_json(*r.exemplar_id) : nullptr;
  return j;
}

inline std::string to_jsonl(const std::vector<ProblemRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(line, std::string("missing field '") + name + "'");
  return *it;
}

inline std::string string_field(const nlohmann::json& j, const char* name, std::size_t line) {
  const auto& v = field(j, name, line);
  if (!v.is_string()) throw ParseError(line, std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

inline std::optional<std::string> optional_string(const nlohmann::json& j, const char* name,
                                                  std::size_t line) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(line, std::string("field '") + name + "' is not a string");
  return it->get<std::string>();
}

inline nlohmann::json parse_line(const std::string& text, std::size_t line) {
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ParseError(line, "expected a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line, e.what());
  }
}

/// Calls fn(json, line_number) for every non-blank line.
template <typename Fn>
void for_each_jsonl(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(parse_line(text, line), line);
  }
}

}  // namespace detail

inline ProblemRecord record_from_json(const nlohmann::json& j, std::size_t line = 0) {
  using namespace detail;
  auto id = string_field(j, "id", line);
  auto scenario = string_field(j, "scenario", line);
  const auto& ops = field(j, "operands", line);
  if (!ops.is_array()) throw ParseError(line, "field 'operands' is not an array");
  auto truth_text = string_field(j, "truth", line);
  auto prompt_zero = string_field(j, "prompt_zero", line);
  try {
    std::vector<DigitString> operands;
    for (const auto& op : ops) {
      if (!op.is_string()) throw ParseError(line, "operand is not a decimal string");
      operands.push_back(DigitString::parse(op.get<std::string>()));
    }
    AdditionProblem problem(std::move(operands));
    auto truth = DigitString::parse(truth_text);
    if (exact_add(problem).result().stripped() != truth.stripped()) {
      throw ParseError(line, "record " + id + ": truth " + truth_text + " is not the exact sum");
    }
    return ProblemRecord{std::move(id), std::move(scenario), std::move(problem),
                         std::move(truth), std::move(prompt_zero),
                         optional_string(j, "prompt_one", line),
                         optional_string(j, "exemplar_id", line)};
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
}

inline std::vector<ProblemRecord> read_dataset(std::istream& in) {
  std::vector<ProblemRecord> records;
  detail::for_each_jsonl(in, [&](const nlohmann::json& j, std::size_t line) {
    records.push_back(record_from_json(j, line));
  });
  return records;
}

inline std::vector<ProblemRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path);
  return read_dataset(in);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed for " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_dataset(const std::vector<ProblemRecord>& records, const std::string& path) {
  write_text(path, to_jsonl(records));
}

}  // namespace lookahead
