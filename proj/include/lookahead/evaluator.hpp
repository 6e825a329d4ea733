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

// Digit-wise scoring of completions against ground truth.
//
// Predictions are right-aligned to the truth: position p of the prediction
// is compared with position p of the truth, and truth positions the
// prediction does not reach count as wrong. Overall correctness compares the
// two digit strings after dropping leading zeros.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lookahead/datasets.hpp"
#include "lookahead/heuristic.hpp"
#include "lookahead/mock_model.hpp"

namespace lookahead {

enum class ParseStatus { kOk, kEmpty, kNonNumeric };

struct ParsedCompletion {
  std::string raw;
  std::optional<DigitString> digits;
  ParseStatus status = ParseStatus::kEmpty;

  bool ok() const noexcept { return status == ParseStatus::kOk; }
};

inline ParsedCompletion parse_completion(const std::string& text, int base = kDefaultBase) {
  ParsedCompletion out;
  out.raw = text;
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto first = std::find_if_not(text.begin(), text.end(), is_space);
  auto last = std::find_if_not(text.rbegin(), std::make_reverse_iterator(first), is_space).base();
  if (first == last) return out;
  std::vector<int> digits;
  for (auto it = first; it != last; ++it) {
    const int v = *it >= '0' && *it <= '9' ? *it - '0' : -1;
    if (v < 0 || v >= base) break;
    digits.push_back(v);
  }
  if (digits.empty()) {
    out.status = ParseStatus::kNonNumeric;
    return out;
  }
  out.digits = DigitString(std::move(digits), base);
  out.status = ParseStatus::kOk;
  return out;
}

struct RecordScore {
  bool overall = false;
  std::vector<bool> position_correct;  // indexed by place value, truth length
  bool length_mismatch = false;
};

inline RecordScore score_record(const ParsedCompletion& pred, const DigitString& truth_in) {
  const auto truth = truth_in.stripped();
  RecordScore score;
  score.position_correct.assign(truth.size(), false);
  if (!pred.ok()) return score;
  const auto& digits = *pred.digits;
  score.length_mismatch = digits.stripped().size() != truth.size();
  for (std::size_t p = 0; p < truth.size() && p < digits.size(); ++p) {
    score.position_correct[p] = digits.at_position(p) == truth.at_position(p);
  }
  score.overall = digits.stripped() == truth;
  return score;
}

struct Tally {
  std::size_t n = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy() const {
    if (n == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(n);
  }
  void add(bool ok) {
    ++n;
    if (ok) ++correct;
  }
};

struct AccuracyReport {
  std::string dataset;
  std::string setting;
  std::size_t operands = 0;
  std::size_t n = 0;
  Tally overall;
  Tally lead;                             // s_d: most significant digit of each truth
  std::map<std::size_t, Tally> position;  // keyed by place value; n is the coverage
  std::size_t length_mismatches = 0;
  std::size_t unparsable = 0;
};

namespace detail {

inline std::string id_list(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

/// Pairs every record with exactly one prediction, in dataset order.
inline std::vector<const Prediction*> reconcile(const std::vector<ProblemRecord>& records,
                                                const std::vector<Prediction>& preds) {
  std::unordered_map<std::string, const Prediction*> by_id;
  std::vector<std::string> duplicates, unknown, missing;
  std::set<std::string> record_ids;
  for (const auto& r : records) record_ids.insert(r.id);
  for (const auto& p : preds) {
    if (!by_id.emplace(p.id, &p).second) duplicates.push_back(p.id);
    if (!record_ids.contains(p.id)) unknown.push_back(p.id);
  }
  std::vector<const Prediction*> paired;
  paired.reserve(records.size());
  for (const auto& r : records) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      missing.push_back(r.id);
    } else {
      paired.push_back(it->second);
    }
  }
  std::string message;
  if (!missing.empty()) message += "missing predictions for ids: " + id_list(missing) + "\n";
  if (!duplicates.empty()) message += "duplicate prediction ids: " + id_list(duplicates) + "\n";
  if (!unknown.empty()) message += "predictions for unknown ids: " + id_list(unknown) + "\n";
  if (!message.empty()) throw ReconciliationError(message);
  return paired;
}

}  // namespace detail

inline AccuracyReport aggregate(const std::vector<ProblemRecord>& records,
                                const std::vector<Prediction>& preds,
                                std::string dataset = {}, std::string setting = {}) {
  const auto paired = detail::reconcile(records, preds);
  AccuracyReport report;
  report.dataset = std::move(dataset);
  report.setting = std::move(setting);
  report.n = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    report.operands = std::max(report.operands, rec.problem.k());
    const auto parsed = parse_completion(paired[i]->completion, rec.problem.base());
    const auto score = score_record(parsed, rec.truth);
    if (!parsed.ok()) ++report.unparsable;
    if (score.length_mismatch) ++report.length_mismatches;
    report.overall.add(score.overall);
    report.lead.add(score.position_correct.back());
    for (std::size_t p = 0; p < score.position_correct.size(); ++p) {
      report.position[p].add(score.position_correct[p]);
    }
  }
  return report;
}

struct DeterminacyRow {
  std::size_t position = 0;
  Tally determined;
  Tally ambiguous;
};

/// Per-position accuracy split by whether the lookahead bracket for the carry
/// into that position is a single value. Position 0 is always determined.
inline std::vector<DeterminacyRow> determinacy_breakdown(const std::vector<ProblemRecord>& records,
                                                         const std::vector<Prediction>& preds,
                                                         int lookahead = 1) {
  const auto paired = detail::reconcile(records, preds);
  std::map<std::size_t, DeterminacyRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto score =
        score_record(parse_completion(paired[i]->completion, rec.problem.base()), rec.truth);
    for (std::size_t p = 0; p < score.position_correct.size(); ++p) {
      auto& row = rows[p];
      row.position = p;
      const bool determined =
          p == 0 || p > rec.problem.width() ||
          classify_position(rec.problem, p, lookahead) == Determinacy::kDetermined;
      (determined ? row.determined : row.ambiguous).add(score.position_correct[p]);
    }
  }
  std::vector<DeterminacyRow> out;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) out.push_back(it->second);
  return out;
}

// Report emission ------------------------------------------------------------

enum class ReportFormat { kCsv, kMarkdown };

namespace detail {

inline std::string fmt3(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::string render_rows(const std::vector<std::string>& header,
                               const std::vector<std::vector<std::string>>& rows,
                               ReportFormat format) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    if (format == ReportFormat::kCsv) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    } else {
      out += "|";
      for (const auto& c : cells) out += " " + c + " |";
    }
    out += "\n";
  };
  emit(header);
  if (format == ReportFormat::kMarkdown) {
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += "\n";
  }
  for (const auto& r : rows) emit(r);
  return out;
}

}  // namespace detail

/// Columns: operands, setting, dataset, n, overall, s_d, then s_P .. s_0 for
/// the widest truth among the reports. Cells for uncovered positions are empty.
inline std::string render_report(const std::vector<AccuracyReport>& reports, ReportFormat format) {
  std::size_t top = 0;
  for (const auto& r : reports) {
    if (!r.position.empty()) top = std::max(top, r.position.rbegin()->first + 1);
  }
  std::vector<std::string> header{"operands", "setting", "dataset", "n", "overall", "s_d"};
  for (std::size_t p = top; p-- > 0;) header.push_back("s_" + std::to_string(p));
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::vector<std::string> row{std::to_string(r.operands), r.setting, r.dataset,
                                 std::to_string(r.n), detail::fmt3(r.overall.accuracy()),
                                 detail::fmt3(r.lead.accuracy())};
    for (std::size_t p = top; p-- > 0;) {
      auto it = r.position.find(p);
      row.push_back(it == r.position.end() ? "" : detail::fmt3(it->second.accuracy()));
    }
    rows.push_back(std::move(row));
  }
  return detail::render_rows(header, rows, format);
}

inline void emit_report(const std::vector<AccuracyReport>& reports, ReportFormat format,
                        const std::string& path) {
  write_text(path, render_report(reports, format));
}

inline std::string render_determinacy(const std::string& dataset,
                                      const std::vector<DeterminacyRow>& rows,
                                      ReportFormat format) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    for (const auto* bucket : {&r.determined, &r.ambiguous}) {
      cells.push_back({dataset, "s_" + std::to_string(r.position),
                       bucket == &r.determined ? "determined" : "ambiguous",
                       std::to_string(bucket->n), detail::fmt3(bucket->accuracy())});
    }
  }
  return detail::render_rows({"dataset", "position", "bucket", "n", "accuracy"}, cells, format);
}

/// Reads a CSV written by render_report back into column -> values rows.
/// Empty cells are absent from the row map.
inline std::vector<std::map<std::string, std::string>> read_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::map<std::string, std::string>> rows;
  if (!std::getline(in, line)) return rows;
  const auto header = detail::split(line, ',');
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = detail::split(line, ',');
    if (cells.size() != header.size()) throw ParseError(lineno, "column count mismatch");
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!cells[i].empty()) row[header[i]] = cells[i];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lookahead
