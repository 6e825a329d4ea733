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

#include "lookahead/predictor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lookahead/datasets.hpp"

namespace lookahead {
namespace {

// Failing t values found by applying the bracket definition directly.
std::vector<int> brute_force_failing(std::size_t k) {
  const int cmax = static_cast<int>(k) * 9 / 10;
  std::vector<int> out;
  for (int t = 0; t <= static_cast<int>(k) * 9; ++t) {
    if (t / 10 != (t + cmax) / 10) out.push_back(t);
  }
  return out;
}

TEST(FailingSetTest, MatchesBruteForce) {
  for (std::size_t k = 2; k <= 11; ++k) EXPECT_EQ(failing_t_set(k), brute_force_failing(k));
  EXPECT_EQ(failing_t_set(2), std::vector<int>{9});
  EXPECT_EQ(failing_t_set(3), (std::vector<int>{8, 9, 18, 19}));
  EXPECT_EQ(failing_t_set(11).size(), 90u);
}

TEST(FailingSetTest, RejectsUnsupportedRegime) {
  EXPECT_THROW(failing_t_set(12), UnsupportedRegimeError);
  EXPECT_THROW(failing_t_set(1), Error);
  EXPECT_EQ(static_cast<int>(UnsupportedRegimeError("x").code()), 2);
}

TEST(PredictedAccuracyTest, ClosedForm) {
  EXPECT_EQ(predicted_first_digit_accuracy(2), Rational(37, 38));
  EXPECT_EQ(to_decimal(predicted_first_digit_accuracy(2)), "0.974");
  EXPECT_EQ(to_decimal(predicted_first_digit_accuracy(4)), "0.878");
  EXPECT_EQ(predicted_first_digit_accuracy(3), Rational(13, 14));
  EXPECT_EQ(predicted_first_digit_accuracy(11), Rational(11, 20));
  for (std::size_t k = 2; k <= 11; ++k) {
    const double n_possible = static_cast<double>(k * 9 + 1);
    const double n_fail = static_cast<double>(brute_force_failing(k).size());
    EXPECT_NEAR(to_double(predicted_first_digit_accuracy(k)),
                (n_possible - n_fail + 0.5 * n_fail) / n_possible, 1e-12);
  }
}

TEST(PredictedAccuracyTest, StrictlyDecreasing) {
  for (std::size_t k = 2; k < 10; ++k) {
    EXPECT_GT(predicted_first_digit_accuracy(k), predicted_first_digit_accuracy(k + 1));
  }
}

TEST(ToDecimalTest, RoundsHalfUp) {
  EXPECT_EQ(to_decimal(Rational(1, 2), 0), "1");
  EXPECT_EQ(to_decimal(Rational(1, 2000)), "0.001");
  EXPECT_EQ(to_decimal(Rational(1, 2001)), "0.000");
  EXPECT_EQ(to_decimal(Rational(19, 20)), "0.950");
  EXPECT_EQ(to_decimal(Rational(1)), "1.000");
}

TEST(AccuracyTableTest, RowsAndAnnotations) {
  const auto rows = first_digit_accuracy_table(2, 11);
  ASSERT_EQ(rows.size(), 10u);
  const char* expected[] = {"0.974", "0.929", "0.878", "0.826", "0.773",
                            "0.719", "0.664", "0.610", "0.555", "0.550"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].k, i + 2);
    EXPECT_EQ(to_decimal(rows[i].predicted_accuracy), expected[i]);
    EXPECT_EQ(rows[i].n_possible_t, (i + 2) * 9 + 1);
  }
  EXPECT_TRUE(rows[0].annotation.empty());
  EXPECT_NE(rows[1].annotation.find("0.928"), std::string::npos);
  EXPECT_NE(rows[9].annotation.find("89"), std::string::npos);
  EXPECT_NE(rows[9].annotation.find("0.540"), std::string::npos);
  EXPECT_THROW(first_digit_accuracy_table(2, 12), UnsupportedRegimeError);
}

TEST(TDistributionTest, TriangularForTwoDigits) {
  const auto pmf = t_distribution(2, DigitDistribution::uniform(0, 9));
  ASSERT_EQ(pmf.size(), 19u);
  Rational total = 0;
  for (int t = 0; t <= 18; ++t) {
    EXPECT_EQ(pmf[t], Rational(10 - std::abs(t - 9), 100));
    total += pmf[t];
  }
  EXPECT_EQ(total, 1);
}

TEST(TDistributionTest, MatchesEnumeration) {
  const auto pmf = t_distribution(3, DigitDistribution::uniform(1, 8));
  std::vector<int> counts(pmf.size(), 0);
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b)
      for (int c = 1; c <= 8; ++c) counts[a + b + c]++;
  for (std::size_t t = 0; t < pmf.size(); ++t) EXPECT_EQ(pmf[t], Rational(counts[t], 512));
}

TEST(DigitDistributionTest, Validation) {
  EXPECT_THROW(DigitDistribution({Rational(1, 2), Rational(1, 3)}), ValidationError);
  EXPECT_THROW(DigitDistribution::uniform(5, 3), ValidationError);
  EXPECT_NO_THROW(DigitDistribution::point_mass(4));
}

TEST(ExactExpectedAccuracyTest, DatasetMode) {
  EXPECT_EQ(exact_expected_accuracy(2, DigitDistribution::uniform(0, 9), 2), Rational(19, 20));
  EXPECT_EQ(exact_expected_accuracy(2, DigitDistribution::uniform(0, 9), 1), 1);
  EXPECT_EQ(exact_expected_accuracy(2, DigitDistribution::uniform(0, 9), 1, false),
            Rational(19, 20));
}

TEST(ExactExpectedAccuracyTest, UniformTReproducesClosedForm) {
  for (std::size_t k = 2; k <= 11; ++k) {
    EXPECT_EQ(expected_accuracy_from_t_pmf(k, uniform_t_pmf(k)),
              predicted_first_digit_accuracy(k));
  }
}

TEST(ExactExpectedAccuracyTest, ScenarioPointMasses) {
  // A digit sum of 9 is always ambiguous for two operands; 12 never is.
  std::vector<Rational> nine(19, Rational(0));
  nine[9] = 1;
  std::vector<Rational> twelve(19, Rational(0));
  twelve[12] = 1;
  EXPECT_EQ(expected_accuracy_from_t_pmf(2, nine), Rational(1, 2));
  EXPECT_EQ(expected_accuracy_from_t_pmf(2, twelve), 1);
}

TEST(MonteCarloTest, AgreesWithExactExpectation) {
  const auto records = gen_multi_operand(2, 2000, 11);
  HeuristicConfig config;
  config.rng_seed = 3;
  const auto report = monte_carlo_accuracy(records, config, 10);
  // Expected s_2 accuracy on this set: 1 - 0.5 P(t_1 = 9).
  std::size_t nines = 0;
  for (const auto& r : records) nines += digit_sums(r.problem)[1] == 9;
  const double expected = 1.0 - 0.5 * static_cast<double>(nines) / records.size();
  const auto& s2 = report.positions.at(2);
  EXPECT_NEAR(s2.mean(), expected, 3 * s2.standard_error() + 1e-9);
  EXPECT_EQ(report.positions.at(0).mean(), 1.0);
  EXPECT_EQ(report.positions.at(1).mean(), 1.0);
}

TEST(MonteCarloTest, ScenarioExtremes) {
  HeuristicConfig config;
  const auto ds4 = monte_carlo_accuracy(gen_scenario("DS4", 100, 1), config, 5);
  EXPECT_EQ(ds4.positions.at(2).mean(), 1.0);
  const auto ds5 = monte_carlo_accuracy(gen_scenario("DS5", 100, 1), config, 20);
  EXPECT_NEAR(ds5.positions.at(2).mean(), 0.5, 0.05);
}

TEST(MonteCarloTest, RejectsEmptyInput) {
  EXPECT_THROW(monte_carlo_accuracy({}, {}, 1), ValidationError);
}

}  // namespace
}  // namespace lookahead
