// Copyright 2026 The bincue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Normality test, Box-Cox transform, Wilcoxon rank-sum and a fixed-effects
// regression with a ROM x condition interaction.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace bincue {

struct AndersonDarlingResult {
  double a2 = 0.0;       // raw statistic
  double a2_star = 0.0;  // small-sample corrected
  double p_value = 0.0;  // D'Agostino-Stephens, mean and SD estimated
};

// Throws InputError for n < 8 and NumericError for zero variance.
AndersonDarlingResult anderson_darling(std::span<const double> sample);

struct BoxCoxResult {
  double lambda = 1.0;
  double log_likelihood = 0.0;
  double shift = 0.0;  // added to every value before transforming
  std::vector<double> transformed;
};

// (y^lambda - 1) / lambda, ln y at lambda = 0.
std::vector<double> box_cox_transform(std::span<const double> y,
                                      double lambda);
// Profile log-likelihood -n/2 ln(sigma^2) + (lambda - 1) sum ln y.
double box_cox_log_likelihood(std::span<const double> y, double lambda);
// Grid lambda = -2, -1.99, ..., 2; the first maximum wins. Throws
// InputError on non-positive values.
BoxCoxResult box_cox(std::span<const double> sample);
// As box_cox, but zeros are allowed: everything is shifted by half the
// smallest positive value when the sample holds a zero. Negative values
// still throw.
BoxCoxResult box_cox_shifted(std::span<const double> sample);

enum class RankSumMethod { kAuto, kExact, kNormal };

struct RankSumResult {
  double statistic = 0.0;  // midrank sum of the first sample
  double u = 0.0;          // statistic - na (na + 1) / 2
  std::optional<double> z; // normal approximation only
  double p_value = 1.0;    // two-sided
  RankSumMethod method = RankSumMethod::kAuto;
};

// Wilcoxon-Mann-Whitney. kAuto enumerates the exact permutation
// distribution of the midrank sum when na + nb <= 12 and otherwise uses
// the tie-corrected normal approximation with continuity correction.
RankSumResult rank_sum(std::span<const double> a, std::span<const double> b,
                       RankSumMethod method = RankSumMethod::kAuto);

inline constexpr int kRankSumExactLimit = 12;

struct RegressionResult {
  // intercept, rom, condition, rom x condition
  std::array<double, 4> coefficients{};
  std::array<double, 4> std_errors{};
  std::array<double, 4> t_stats{};
  std::array<double, 4> p_values{};
  double r_squared = 0.0;
  int df_residual = 0;
  std::vector<double> residuals;
};

// y = b0 + b1 rom + b2 cond + b3 rom cond by least squares with classical
// standard errors and Student-t p values. Throws InputError for n <= 4,
// mismatched lengths or a rank-deficient design.
RegressionResult ols_interaction(std::span<const double> y,
                                 std::span<const double> rom,
                                 std::span<const double> condition);

}  // namespace bincue
