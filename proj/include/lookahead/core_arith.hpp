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

// Exact left-to-right multi-operand addition with per-position traces.
//
// Positions are indexed by place value: position i holds the digit that
// multiplies base^i. DigitString stores digits most-significant first, so
// position i of an n-digit string lives at index n - 1 - i.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lookahead/error.hpp"

namespace lookahead {

inline constexpr int kDefaultBase = 10;

/// A base-B digit sequence, most-significant digit first.
class DigitString {
 public:
  DigitString() = default;

  DigitString(std::vector<int> digits, int base = kDefaultBase)
      : digits_(std::move(digits)), base_(base) {
    if (base_ < 2) throw ValidationError("base must be >= 2");
    if (digits_.empty()) throw ValidationError("digit string must be non-empty");
    for (int d : digits_) {
      if (d < 0 || d >= base_) {
        throw ValidationError("digit " + std::to_string(d) +
                              " out of range for base " + std::to_string(base_));
      }
    }
  }

  /// Parses decimal text ("402"). Only valid for bases up to 10.
  static DigitString parse(std::string_view text, int base = kDefaultBase) {
    if (text.empty()) throw ValidationError("empty digit string");
    std::vector<int> digits;
    digits.reserve(text.size());
    for (char ch : text) {
      if (ch < '0' || ch > '9') {
        throw ValidationError("non-digit character in '" + std::string(text) + "'");
      }
      digits.push_back(ch - '0');
    }
    return DigitString(std::move(digits), base);
  }

  std::span<const int> digits() const noexcept { return digits_; }
  int base() const noexcept { return base_; }
  std::size_t size() const noexcept { return digits_.size(); }

  /// Digit at place value base^position; 0 beyond the most significant digit.
  int at_position(std::size_t position) const noexcept {
    if (position >= digits_.size()) return 0;
    return digits_[digits_.size() - 1 - position];
  }

  /// Left-zero-pads to `width` digits. Never truncates.
  DigitString padded(std::size_t width) const {
    if (width <= digits_.size()) return *this;
    std::vector<int> out(width - digits_.size(), 0);
    out.insert(out.end(), digits_.begin(), digits_.end());
    return DigitString(std::move(out), base_);
  }

  /// Drops leading zeros, keeping at least one digit.
  DigitString stripped() const {
    auto first = std::find_if(digits_.begin(), digits_.end() - 1,
                              [](int d) { return d != 0; });
    return DigitString(std::vector<int>(first, digits_.end()), base_);
  }

  /// Decimal-style rendering; bases above 10 use letters.
  std::string str() const {
    std::string out;
    out.reserve(digits_.size());
    for (int d : digits_) {
      out.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
    }
    return out;
  }

  friend bool operator==(const DigitString&, const DigitString&) = default;

 private:
  std::vector<int> digits_{0};
  int base_ = kDefaultBase;
};

inline DigitString int_to_digits(std::uint64_t value, int base = kDefaultBase,
                                 std::size_t min_width = 1) {
  if (base < 2) throw ValidationError("base must be >= 2");
  std::vector<int> rev;
  do {
    rev.push_back(static_cast<int>(value % static_cast<std::uint64_t>(base)));
    value /= static_cast<std::uint64_t>(base);
  } while (value != 0);
  while (rev.size() < min_width) rev.push_back(0);
  return DigitString(std::vector<int>(rev.rbegin(), rev.rend()), base);
}

/// Signed overload so that negative inputs are rejected rather than wrapped.
inline DigitString int_to_digits(std::int64_t value, int base = kDefaultBase,
                                 std::size_t min_width = 1) {
  if (value < 0) throw ValidationError("negative value " + std::to_string(value));
  return int_to_digits(static_cast<std::uint64_t>(value), base, min_width);
}

inline DigitString int_to_digits(int value, int base = kDefaultBase,
                                 std::size_t min_width = 1) {
  return int_to_digits(static_cast<std::int64_t>(value), base, min_width);
}

inline std::uint64_t digits_to_int(const DigitString& ds) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto base = static_cast<std::uint64_t>(ds.base());
  std::uint64_t value = 0;
  for (int d : ds.digits()) {
    if (value > (kMax - static_cast<std::uint64_t>(d)) / base) {
      throw ValidationError("digit string " + ds.str() + " overflows 64 bits");
    }
    value = value * base + static_cast<std::uint64_t>(d);
  }
  return value;
}

/// k >= 2 operands sharing one base, left-zero-padded to a common width.
class AdditionProblem {
 public:
  explicit AdditionProblem(std::vector<DigitString> operands) {
    if (operands.size() < 2) {
      throw ValidationError("an addition problem needs at least 2 operands");
    }
    base_ = operands.front().base();
    for (const auto& op : operands) {
      if (op.base() != base_) throw ValidationError("operand base mismatch");
      width_ = std::max(width_, op.size());
    }
    operands_.reserve(operands.size());
    for (auto& op : operands) operands_.push_back(op.padded(width_));
  }

  static AdditionProblem from_ints(std::span<const std::uint64_t> values,
                                   int base = kDefaultBase) {
    std::vector<DigitString> ops;
    ops.reserve(values.size());
    for (auto v : values) ops.push_back(int_to_digits(v, base));
    return AdditionProblem(std::move(ops));
  }

  static AdditionProblem from_ints(std::initializer_list<std::uint64_t> values,
                                   int base = kDefaultBase) {
    return from_ints(std::span<const std::uint64_t>(values.begin(), values.size()), base);
  }

  std::span<const DigitString> operands() const noexcept { return operands_; }
  std::size_t k() const noexcept { return operands_.size(); }
  std::size_t width() const noexcept { return width_; }
  int base() const noexcept { return base_; }

  /// Operands as integers, in order.
  std::vector<std::uint64_t> values() const {
    std::vector<std::uint64_t> out;
    out.reserve(operands_.size());
    for (const auto& op : operands_) out.push_back(digits_to_int(op));
    return out;
  }

 private:
  std::vector<DigitString> operands_;
  std::size_t width_ = 0;
  int base_ = kDefaultBase;
};

/// t_i = sum_j n_{j,i}, indexed by position (index 0 is the units digit).
inline std::vector<int> digit_sums(const AdditionProblem& problem) {
  std::vector<int> sums(problem.width(), 0);
  for (const auto& op : problem.operands()) {
    for (std::size_t i = 0; i < problem.width(); ++i) sums[i] += op.at_position(i);
  }
  return sums;
}

/// Full per-position record of exact addition. Vectors are indexed by
/// position; `carry` has width + 1 entries (carry[0] = 0, carry[width] = c_d).
struct ExactTrace {
  int base = kDefaultBase;
  std::vector<int> digit_sum;  // t_i
  std::vector<int> carry;      // c_i
  std::vector<int> total;      // T_i
  std::vector<int> digit;      // s_i, i < d

  std::size_t width() const noexcept { return digit_sum.size(); }
  int final_carry() const noexcept { return carry.back(); }

  /// [s_d, s_{d-1}, ..., s_0] with s_d = c_d kept even when zero. A final
  /// carry of base or more (possible from k = 11 in base 10) expands into several digits.
  DigitString result() const {
    std::vector<int> out;
    auto top = int_to_digits(static_cast<std::uint64_t>(final_carry()), base);
    out.assign(top.digits().begin(), top.digits().end());
    for (std::size_t i = digit.size(); i-- > 0;) out.push_back(digit[i]);
    return DigitString(std::move(out), base);
  }
};

inline ExactTrace exact_add(const AdditionProblem& problem) {
  ExactTrace trace;
  trace.base = problem.base();
  trace.digit_sum = digit_sums(problem);
  const std::size_t d = problem.width();
  trace.carry.assign(d + 1, 0);
  trace.total.assign(d, 0);
  trace.digit.assign(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    trace.total[i] = trace.digit_sum[i] + trace.carry[i];
    trace.digit[i] = trace.total[i] % trace.base;
    trace.carry[i + 1] = trace.total[i] / trace.base;
  }
  return trace;
}

}  // namespace lookahead
