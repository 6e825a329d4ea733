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

// Accuracy predictions for the one-digit-lookahead heuristic.
//
// Uniform mode assumes every digit sum t in [0, k(base-1)] is equally likely.
// Dataset mode convolves a per-digit distribution k times instead. Both are
// computed in exact rational arithmetic; an ambiguous bracket with m
// candidates is resolved correctly with probability 1/m.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lookahead/datasets.hpp"
#include "lookahead/heuristic.hpp"

namespace lookahead {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline void require_supported_regime(std::size_t k, int base) {
  const int cmax = c_max(k, base);
  if (cmax >= base) {
    throw UnsupportedRegimeError("k=" + std::to_string(k) + " gives c_max=" +
                                 std::to_string(cmax) + " >= base " + std::to_string(base) +
                                 "; brackets may span more than two carries");
  }
}

/// Digit sums t for which floor(t/base) != floor((t + c_max)/base).
inline std::vector<int> failing_t_set(std::size_t k, int base = kDefaultBase) {
  require_supported_regime(k, base);
  const int cmax = c_max(k, base);
  std::vector<int> out;
  for (int t = 0; t <= static_cast<int>(k) * (base - 1); ++t) {
    if (t % base >= base - cmax) out.push_back(t);
  }
  return out;
}

/// Exact decimal rounding, half away from zero, for non-negative values.
inline std::string to_decimal(const Rational& value, int places = 3) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const BigInt num = boost::multiprecision::numerator(value) * scale * 2 +
                     boost::multiprecision::denominator(value);
  const BigInt scaled = num / (boost::multiprecision::denominator(value) * 2);
  const BigInt whole = scaled / scale;
  if (places == 0) return whole.str();
  std::string frac = BigInt(scaled % scale).str();
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  return whole.str() + "." + frac;
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Accuracy on the first result digit when every t value is equally likely.
inline Rational predicted_first_digit_accuracy(std::size_t k, int base = kDefaultBase) {
  const auto failing = failing_t_set(k, base);
  const long n_possible = static_cast<long>(k) * (base - 1) + 1;
  const long n_failing = static_cast<long>(failing.size());
  return (Rational(n_possible - n_failing) + Rational(n_failing, 2)) / n_possible;
}

/// Per-digit probability mass over 0..base-1.
class DigitDistribution {
 public:
  explicit DigitDistribution(std::vector<Rational> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.size() < 2) throw ValidationError("digit pmf needs at least 2 entries");
    Rational total = 0;
    for (const auto& p : pmf_) {
      if (p < 0) throw ValidationError("negative probability in digit pmf");
      total += p;
    }
    if (total != 1) throw ValidationError("digit pmf sums to " + total.str() + ", not 1");
  }

  /// Uniform over digits lo..hi inclusive.
  static DigitDistribution uniform(int lo, int hi, int base = kDefaultBase) {
    if (lo < 0 || hi >= base || lo > hi) throw ValidationError("bad uniform digit range");
    std::vector<Rational> pmf(static_cast<std::size_t>(base), Rational(0));
    for (int v = lo; v <= hi; ++v) pmf[static_cast<std::size_t>(v)] = Rational(1, hi - lo + 1);
    return DigitDistribution(std::move(pmf));
  }

  static DigitDistribution point_mass(int digit, int base = kDefaultBase) {
    return uniform(digit, digit, base);
  }

  int base() const noexcept { return static_cast<int>(pmf_.size()); }
  const std::vector<Rational>& pmf() const noexcept { return pmf_; }

 private:
  std::vector<Rational> pmf_;
};

/// pmf of t = sum of k independent digits, indexed by t.
inline std::vector<Rational> t_distribution(std::size_t k, const DigitDistribution& dd) {
  if (k < 1) throw ValidationError("t_distribution needs k >= 1");
  std::vector<Rational> acc = dd.pmf();
  for (std::size_t j = 1; j < k; ++j) {
    std::vector<Rational> next(acc.size() + dd.pmf().size() - 1, Rational(0));
    for (std::size_t a = 0; a < acc.size(); ++a) {
      if (acc[a] == 0) continue;
      for (std::size_t b = 0; b < dd.pmf().size(); ++b) next[a + b] += acc[a] * dd.pmf()[b];
    }
    acc = std::move(next);
  }
  return acc;
}

/// Uniform pmf over every attainable digit sum (uniform mode).
inline std::vector<Rational> uniform_t_pmf(std::size_t k, int base = kDefaultBase) {
  const std::size_t n = k * static_cast<std::size_t>(base - 1) + 1;
  return std::vector<Rational>(n, Rational(1, static_cast<long>(n)));
}

/// E[correct] for a digit whose incoming carry is bracketed from t ~ pmf.
inline Rational expected_accuracy_from_t_pmf(std::size_t k, const std::vector<Rational>& pmf,
                                             int base = kDefaultBase) {
  require_supported_regime(k, base);
  Rational acc = 0;
  for (std::size_t t = 0; t < pmf.size(); ++t) {
    if (pmf[t] == 0) continue;
    auto est = bracket_carry(static_cast<int>(t), k, base);
    acc += pmf[t] / est.candidate_count();
  }
  return acc;
}

/// 1 - 0.5 * P(t_{position-1} fails) with t convolved from `dd`. Position 1
/// is always correct when the boundary carry c_0 = 0 is used.
inline Rational exact_expected_accuracy(std::size_t k, const DigitDistribution& dd,
                                        std::size_t position, bool boundary_exact = true) {
  if (position < 1) throw ValidationError("position must be >= 1");
  require_supported_regime(k, dd.base());
  if (position == 1 && boundary_exact) return Rational(1);
  return expected_accuracy_from_t_pmf(k, t_distribution(k, dd), dd.base());
}

/// Values printed in the reference table, used only to annotate
/// disagreements with the recomputed rows.
struct PrintedRow {
  std::size_t failing_count;
  const char* accuracy;
};

inline const std::map<std::size_t, PrintedRow>& printed_reference_rows() {
  static const std::map<std::size_t, PrintedRow> rows{
      {2, {1, "0.974"}},  {3, {4, "0.928"}},  {4, {9, "0.878"}},  {5, {16, "0.826"}},
      {6, {25, "0.773"}}, {7, {36, "0.719"}}, {8, {49, "0.664"}}, {9, {64, "0.610"}},
      {10, {81, "0.555"}}, {11, {89, "0.540"}},
  };
  return rows;
}

struct AccuracyPrediction {
  std::size_t k = 0;
  int c_max = 0;
  std::vector<int> failing_t_values;
  std::size_t n_possible_t = 0;
  Rational predicted_accuracy;
  Rational dataset_mode_accuracy;
  std::string annotation;  // non-empty when the printed reference row disagrees
};

/// One row per k. Dataset mode uses digits uniform over 0..base-1 at the
/// lookahead position (the middle digit of three-digit operands).
inline std::vector<AccuracyPrediction> first_digit_accuracy_table(std::size_t k_from, std::size_t k_to,
                                                        int base = kDefaultBase) {
  if (k_from > k_to) throw ValidationError("empty k range");
  std::vector<AccuracyPrediction> rows;
  const auto middle = DigitDistribution::uniform(0, base - 1, base);
  for (std::size_t k = k_from; k <= k_to; ++k) {
    AccuracyPrediction row;
    row.k = k;
    row.c_max = c_max(k, base);
    row.failing_t_values = failing_t_set(k, base);
    row.n_possible_t = k * static_cast<std::size_t>(base - 1) + 1;
    row.predicted_accuracy = predicted_first_digit_accuracy(k, base);
    row.dataset_mode_accuracy = exact_expected_accuracy(k, middle, 2);
    if (base == kDefaultBase) {
      const auto& printed = printed_reference_rows();
      if (auto it = printed.find(k); it != printed.end()) {
        std::string ours = to_decimal(row.predicted_accuracy);
        std::vector<std::string> notes;
        if (it->second.failing_count != row.failing_t_values.size()) {
          notes.push_back("reference lists " + std::to_string(it->second.failing_count) +
                          " failing t values; enumeration finds " +
                          std::to_string(row.failing_t_values.size()));
        }
        if (ours != it->second.accuracy) {
          notes.push_back("reference prints " + std::string(it->second.accuracy) +
                          "; exact value " + row.predicted_accuracy.str() + " rounds to " +
                          ours);
        }
        for (std::size_t i = 0; i < notes.size(); ++i) {
          row.annotation += (i ? "; " : "") + notes[i];
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Monte-Carlo ----------------------------------------------------------------

struct PositionEstimate {
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::size_t records = 0;  // records whose truth covers the position
  double mean() const { return trials ? static_cast<double>(correct) / trials : 0.0; }
  /// Binomial standard error with the record count as sample size. Draws
  /// within one record share its digit sums and are not independent.
  double standard_error() const {
    if (records == 0) return 0.0;
    const double p = mean();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(records));
  }
};

struct MonteCarloReport {
  std::size_t records = 0;
  std::size_t draws_per_record = 0;
  std::map<std::size_t, PositionEstimate> positions;  // keyed by place value
  PositionEstimate overall;
  PositionEstimate lead;  // most significant digit of each truth
};

/// Runs heuristic_add `trials` times per record. Draw j of record r uses a
/// generator seeded with derive_seed(config.rng_seed, r.id + "#" + j).
inline MonteCarloReport monte_carlo_accuracy(const std::vector<ProblemRecord>& records,
                                             const HeuristicConfig& config, std::size_t trials) {
  if (records.empty()) throw ValidationError("monte_carlo_accuracy needs a non-empty dataset");
  if (trials == 0) throw ValidationError("trials must be >= 1");
  MonteCarloReport report;
  report.records = records.size();
  report.draws_per_record = trials;
  for (const auto& rec : records) {
    const auto truth = rec.truth.stripped();
    const std::size_t len = truth.size();
    for (std::size_t p = 0; p < len; ++p) report.positions[p].records++;
    report.overall.records++;
    report.lead.records++;
    for (std::size_t draw = 0; draw < trials; ++draw) {
      Rng rng(derive_seed(config.rng_seed, rec.id + "#" + std::to_string(draw)));
      const auto trace = heuristic_add(rec.problem, config, rng);
      const auto predicted = trace.result();
      for (std::size_t p = 0; p < len; ++p) {
        auto& est = report.positions[p];
        est.trials++;
        if (predicted.at_position(p) == truth.at_position(p)) est.correct++;
      }
      report.lead.trials++;
      if (predicted.at_position(len - 1) == truth.at_position(len - 1)) report.lead.correct++;
      report.overall.trials++;
      if (predicted.stripped() == truth) report.overall.correct++;
    }
  }
  return report;
}

}  // namespace lookahead
