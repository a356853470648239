// Copyright 2026 The abnirml Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace abnirml {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
[[nodiscard]] double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `df` degrees of freedom (df > 0, may be fractional).
[[nodiscard]] double t_cdf(double t, double df);

/// Two-sided tail probability P(|T| >= |t|).
[[nodiscard]] double t_two_sided_p(double t, double df);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
};

/// Two-sided paired t-test on score1 - score2 (sample sd, n - 1 denominator).
/// Zero spread gives t = 0, p = 1 when the mean is zero and t = +-inf, p = 0
/// otherwise. Throws ValidationError for fewer than two pairs.
[[nodiscard]] TTestResult paired_t_test(std::span<std::pair<double, double> const> pairs);

/// significant[i] = p[i] < alpha / m. Requires m >= p.size() >= 1.
[[nodiscard]] std::vector<bool> bonferroni(std::span<double const> p_values, double alpha, std::size_t m);

}  // namespace abnirml
