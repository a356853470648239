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

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "abnirml/textproc.hpp"

namespace abnirml {

/// Stemmed non-stopword query term -> frequency in the document.
using TfVector = std::map<std::string, std::int64_t, std::less<>>;

enum class Characteristic { kRelevance, kLength, kTf, kSumTf, kOverlap };

[[nodiscard]] std::string_view to_string(Characteristic c);
/// Accepts "relevance", "length", "tf", "sumtf"/"sum-tf", "overlap" (any case).
[[nodiscard]] Characteristic parse_characteristic(std::string_view name);

/// Non-negative rational with exact comparison.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(Ratio a, Ratio b) noexcept { return a.num * b.den == b.num * a.den; }
    friend std::strong_ordering operator<=>(Ratio a, Ratio b) noexcept { return a.num * b.den <=> b.num * a.den; }
};

[[nodiscard]] std::int64_t doc_length(std::string_view doc, PipelineConfig const& config);
[[nodiscard]] TfVector tf_vector(std::string_view query, std::string_view doc, PipelineConfig const& config);
[[nodiscard]] std::int64_t sum_tf(TfVector const& tf);
[[nodiscard]] std::int64_t sum_tf(std::string_view query, std::string_view doc, PipelineConfig const& config);
/// Sum-TF over document length. Throws ValidationError for zero-length documents.
[[nodiscard]] Ratio overlap(std::int64_t sum_tf, std::int64_t doc_length);
[[nodiscard]] Ratio overlap(std::string_view query, std::string_view doc, PipelineConfig const& config);

/// Pareto dominance: every term >= and at least one term >. Key sets must match.
[[nodiscard]] bool tf_dominates(TfVector const& a, TfVector const& b);

/// All five characteristics of one judged (query, document) pair.
struct Measurement {
    int relevance = 0;
    std::int64_t length = 0;
    TfVector tf;
    std::int64_t sum_tf = 0;

    [[nodiscard]] bool degenerate() const noexcept { return length == 0; }
    [[nodiscard]] Ratio overlap() const { return abnirml::overlap(sum_tf, length); }
};

[[nodiscard]] Measurement measure(std::string_view query, std::string_view doc, int relevance,
                                  PipelineConfig const& config);

}  // namespace abnirml
