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

// One-digit-lookahead carry estimation and its L-digit generalisation.
//
// A left-to-right generator that must commit to s_i before seeing the digit
// sums below i-L can only bracket the incoming carry: start from every carry
// that could enter position i-L, i.e. [0, c_max(k)], and push that interval
// through the L known digit sums. With L = 1 the bracket is
//   { floor(t_{i-1} / base), floor((t_{i-1} + c_max) / base) }.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lookahead/core_arith.hpp"
#include "lookahead/rng.hpp"

namespace lookahead {

/// floor(k * (base - 1) / base), the largest carry out of a column when the
/// carry into it is small. Propagated carries reach k - 1, which exceeds this
/// once k > base, so the bracket is not guaranteed to hold the true carry there.
inline int c_max(std::size_t k, int base = kDefaultBase) {
  if (k < 2) throw ValidationError("c_max needs k >= 2, got " + std::to_string(k));
  if (base < 2) throw ValidationError("base must be >= 2");
  return static_cast<int>(k) * (base - 1) / base;
}

inline constexpr int kCarryMin = 0;

/// Bracketed carry into `position`. Determined when lo == hi.
struct CarryEstimate {
  std::size_t position = 0;
  int lo = 0;
  int hi = 0;

  static CarryEstimate determined(std::size_t position, int carry) {
    return {position, carry, carry};
  }

  bool is_determined() const noexcept { return lo == hi; }
  bool is_ambiguous() const noexcept { return lo != hi; }
  int value() const noexcept { return lo; }
  /// Number of candidate carries; the candidate set is every integer in [lo, hi].
  int candidate_count() const noexcept { return hi - lo + 1; }
  bool contains(int carry) const noexcept { return lo <= carry && carry <= hi; }

  friend bool operator==(const CarryEstimate&, const CarryEstimate&) = default;
};

enum class TieBreak { kUniformRandom, kAlwaysLow, kAlwaysHigh };

inline std::string to_string(TieBreak policy) {
  switch (policy) {
    case TieBreak::kUniformRandom: return "uniform";
    case TieBreak::kAlwaysLow: return "low";
    case TieBreak::kAlwaysHigh: return "high";
  }
  return "uniform";
}

inline TieBreak parse_tie_break(const std::string& name) {
  if (name == "uniform") return TieBreak::kUniformRandom;
  if (name == "low") return TieBreak::kAlwaysLow;
  if (name == "high") return TieBreak::kAlwaysHigh;
  throw ValidationError("unknown tie-break policy '" + name + "' (uniform|low|high)");
}

struct HeuristicConfig {
  int lookahead = 1;
  TieBreak tie_break = TieBreak::kUniformRandom;
  std::uint64_t rng_seed = 0;
  /// Use the known c_0 = 0 when the lookahead window reaches position 0.
  bool exact_at_boundary = true;

  void validate() const {
    if (lookahead < 1) throw ValidationError("lookahead must be >= 1");
  }
};

/// Bracket for the carry into position i from t_{i-1} alone.
/// With boundary_exact the incoming carry to position i-1 is known to be 0.
inline CarryEstimate bracket_carry(int t_prev, std::size_t k, int base = kDefaultBase,
                                   bool boundary_exact = false, std::size_t position = 0) {
  const int cmax = c_max(k, base);
  if (t_prev < 0 || t_prev > static_cast<int>(k) * (base - 1)) {
    throw ValidationError("digit sum " + std::to_string(t_prev) + " out of range for k=" +
                          std::to_string(k));
  }
  const int lo = (t_prev + kCarryMin) / base;
  const int hi = boundary_exact ? lo : (t_prev + cmax) / base;
  return {position, lo, hi};
}

/// Carry into position i bracketed from the L digit sums t_{i-L} .. t_{i-1}.
/// The interval map c -> floor((t + c) / base) is monotone and its image of an
/// integer interval is again an integer interval, so propagation is exact.
/// L >= i reaches position 0 and, with boundary_exact, yields the true carry.
inline CarryEstimate bracket_carry_L(const std::vector<int>& sums, std::size_t k,
                                     std::size_t position, int lookahead,
                                     int base = kDefaultBase, bool boundary_exact = true) {
  if (lookahead < 1) throw ValidationError("lookahead must be >= 1");
  if (position < 1 || position > sums.size()) {
    throw ValidationError("carry position " + std::to_string(position) + " outside [1, " +
                          std::to_string(sums.size()) + "]");
  }
  const std::size_t depth = std::min(static_cast<std::size_t>(lookahead), position);
  const std::size_t start = position - depth;
  int lo = kCarryMin;
  int hi = (start == 0 && boundary_exact) ? 0 : c_max(k, base);
  for (std::size_t j = start; j < position; ++j) {
    lo = (sums[j] + lo) / base;
    hi = (sums[j] + hi) / base;
  }
  return {position, lo, hi};
}

inline CarryEstimate bracket_carry_L(const AdditionProblem& problem, std::size_t position,
                                     int lookahead, bool boundary_exact = true) {
  return bracket_carry_L(digit_sums(problem), problem.k(), position, lookahead,
                         problem.base(), boundary_exact);
}

inline int resolve(const CarryEstimate& estimate, TieBreak policy, Rng& rng) {
  if (estimate.is_determined()) return estimate.value();
  switch (policy) {
    case TieBreak::kAlwaysLow: return estimate.lo;
    case TieBreak::kAlwaysHigh: return estimate.hi;
    case TieBreak::kUniformRandom:
      return estimate.lo + static_cast<int>(uniform_below(
                               rng, static_cast<std::uint64_t>(estimate.candidate_count())));
  }
  return estimate.lo;
}

enum class Determinacy { kDetermined, kAmbiguous };

inline const char* to_string(Determinacy d) {
  return d == Determinacy::kDetermined ? "determined" : "ambiguous";
}

inline Determinacy classify_position(const AdditionProblem& problem, std::size_t position,
                                     int lookahead = 1, bool boundary_exact = true) {
  return bracket_carry_L(problem, position, lookahead, boundary_exact).is_determined()
             ? Determinacy::kDetermined
             : Determinacy::kAmbiguous;
}

/// Per-position record of a heuristic run. Vectors are indexed by position
/// and have width + 1 entries; index d is the final-carry slot (t_d = 0).
struct HeuristicTrace {
  int base = kDefaultBase;
  std::vector<CarryEstimate> estimate;
  std::vector<int> carry;  // c_i^h
  std::vector<int> total;  // T_i^h
  std::vector<int> digit;  // s_i^h

  bool ambiguous(std::size_t position) const { return estimate[position].is_ambiguous(); }

  std::vector<std::size_t> ambiguous_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = estimate.size(); i-- > 0;) {
      if (estimate[i].is_ambiguous()) out.push_back(i);
    }
    return out;
  }

  /// [s_d^h, ..., s_0^h]; a top total of base or more expands like ExactTrace.
  DigitString result() const {
    const std::size_t d = total.size() - 1;
    auto top = int_to_digits(static_cast<std::uint64_t>(total[d]), base);
    std::vector<int> out(top.digits().begin(), top.digits().end());
    for (std::size_t i = d; i-- > 0;) out.push_back(digit[i]);
    return DigitString(std::move(out), base);
  }
};

/// Estimates every carry independently from the digit sums below it; no
/// position sees the carries chosen for other positions. Random draws are
/// taken from the most significant ambiguous position downwards.
inline HeuristicTrace heuristic_add(const AdditionProblem& problem, const HeuristicConfig& config,
                                    Rng& rng) {
  config.validate();
  const auto sums = digit_sums(problem);
  const std::size_t d = problem.width();
  const int base = problem.base();
  HeuristicTrace trace;
  trace.base = base;
  trace.estimate.assign(d + 1, CarryEstimate{});
  trace.carry.assign(d + 1, 0);
  trace.total.assign(d + 1, 0);
  trace.digit.assign(d + 1, 0);
  // The result length is taken as known: the s_d slot is only generated when
  // the exact sum is wider than the operands.
  const bool top_slot = exact_add(problem).final_carry() != 0;
  for (std::size_t i = d + 1; i-- > 0;) {
    CarryEstimate est = i == 0 || (i == d && !top_slot)
                            ? CarryEstimate::determined(i, 0)
                            : bracket_carry_L(sums, problem.k(), i, config.lookahead, base,
                                              config.exact_at_boundary);
    trace.estimate[i] = est;
    trace.carry[i] = resolve(est, config.tie_break, rng);
    trace.total[i] = (i < d ? sums[i] : 0) + trace.carry[i];
    trace.digit[i] = trace.total[i] % base;
  }
  return trace;
}

}  // namespace lookahead
