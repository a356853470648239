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
#include <string>

#include "abnirml/corpus.hpp"
#include "abnirml/measures.hpp"
#include "abnirml/pairtest.hpp"

namespace abnirml {

/// How far apart two control values may be and still count as matching.
/// Integers are absolute differences (per component for TF); overlap is an
/// absolute difference of the two ratios and also the minimum gap for overlap
/// used as the variable.
struct Tolerances {
    std::int64_t relevance = 0;
    std::int64_t length = 0;
    std::int64_t tf = 0;
    std::int64_t sum_tf = 0;
    double overlap = 1e-6;
};

/// Parses "name=value" (e.g. "length=2", "overlap=1e-4") into `tolerances`.
void set_tolerance(Tolerances& tolerances, std::string_view assignment);

struct MmtSpec {
    Characteristic variable = Characteristic::kRelevance;
    Characteristic control = Characteristic::kLength;
    Tolerances tolerances;

    /// Throws ConfigError for variable == control and for the TF/Sum-TF
    /// combinations, which cannot produce pairs.
    void validate() const;
    [[nodiscard]] std::string test_id() const;
};

[[nodiscard]] bool controls_match(Characteristic control, Measurement const& a, Measurement const& b,
                                  Tolerances const& tolerances);

/// +1 when `a` is higher than `b` on the variable, -1 when lower, 0 when the
/// variable does not separate them.
[[nodiscard]] int variable_order(Characteristic variable, Measurement const& a, Measurement const& b,
                                 Tolerances const& tolerances);

/// Pairs judged documents of the same query that match on the control and
/// differ on the variable; d1 is the document higher on the variable.
[[nodiscard]] TestSet build_mmt(MmtSpec const& spec, Qrels const& qrels, Collection const& collection,
                                QuerySet const& queries, PipelineConfig const& config, std::size_t jobs = 1);

}  // namespace abnirml
