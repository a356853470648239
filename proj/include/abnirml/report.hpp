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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abnirml/pairtest.hpp"

namespace abnirml {

inline constexpr double kDefaultAlpha = 0.001;

/// One table cell: a test, or a stratum of a test.
struct TestResult {
    std::string test_id;
    std::string stratum;  ///< empty for the whole test
    std::size_t n = 0;
    std::int64_t effect_sum = 0;
    double s = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool significant = false;
    std::vector<TestResult> strata;
};

enum class ReportFormat { kMarkdown, kCsv, kJson };
[[nodiscard]] ReportFormat parse_report_format(std::string_view name);

/// Joins effects to the samples of `test` by (query id, d1 id, d2 id) and
/// computes s, t and p for the whole test and for its strata: relevance bands
/// rel01 / rel23 for manipulation tests (from meta "grade"), and per category,
/// source and spellchecked value for dataset-transfer tests. Significance is
/// left for apply_bonferroni.
[[nodiscard]] TestResult analyze(TestSet const& test, std::span<EffectRecord const> effects);

/// Number of cells with at least one sample, strata included.
[[nodiscard]] std::size_t scored_cells(std::span<TestResult const> results);

/// Marks cells with p < alpha / m, where m = scored_cells(results).
/// Returns m.
std::size_t apply_bonferroni(std::vector<TestResult>& results, double alpha = kDefaultAlpha);

/// Two decimals with an explicit sign: "+0.40", "−0.01" (U+2212), "0.00".
[[nodiscard]] std::string format_score(double s);

[[nodiscard]] std::string render_report(std::span<TestResult const> results, ReportFormat format,
                                        double alpha = kDefaultAlpha);

}  // namespace abnirml
