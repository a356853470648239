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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abnirml/corpus.hpp"
#include "abnirml/scorer.hpp"

namespace abnirml {

enum class Strategy { kMmt, kTmt, kDtt };

[[nodiscard]] std::string_view to_string(Strategy strategy);
[[nodiscard]] Strategy parse_strategy(std::string_view name);

/// One test unit <q, d1, d2>. Which document is d1 is decided by the builder
/// and is never swapped afterwards: a positive effect means the scorer
/// prefers d1.
struct PairSample {
    Query query;
    Doc d1;
    Doc d2;
    std::map<std::string, std::string> meta;

    friend bool operator==(PairSample const&, PairSample const&) = default;
};

struct TestSet {
    std::string id;
    Strategy strategy = Strategy::kMmt;
    std::vector<PairSample> samples;
    nlohmann::json provenance = nlohmann::json::object();

    friend bool operator==(TestSet const&, TestSet const&) = default;
};

struct EffectRecord {
    std::string query_id;
    std::string d1_id;
    std::string d2_id;
    double score1 = 0.0;
    double score2 = 0.0;
    int effect = 0;

    friend bool operator==(EffectRecord const&, EffectRecord const&) = default;
};

/// +1 if score1 - score2 > delta, -1 if it is < -delta, else 0. A difference
/// of exactly delta is neutral.
[[nodiscard]] int effect(double score1, double score2, double delta);

/// Mean effect. Throws ValidationError on an empty list.
[[nodiscard]] double summary_score(std::span<int const> effects);
[[nodiscard]] double summary_score(std::span<EffectRecord const> records);

/// Sorts by (query id, d1 id, d2 id).
void canonical_sort(std::vector<PairSample>& samples);
[[nodiscard]] bool is_canonical(std::vector<PairSample> const& samples);

/// Scores both documents of every sample and applies effect(). Each distinct
/// (query text, doc text) pair is sent to the scorer once. With jobs > 1 and a
/// concurrent scorer the work is split across threads; the result is the same
/// as a sequential run.
[[nodiscard]] std::vector<EffectRecord> evaluate(TestSet const& test, Scorer& scorer, double delta,
                                                 std::size_t jobs = 1);

// JSON-lines files. A test set starts with a header object
// {"test_id","strategy","provenance"} followed by one object per sample.
[[nodiscard]] std::string serialize_test_set(TestSet const& test);
[[nodiscard]] TestSet parse_test_set(std::string_view contents, std::string const& source = "<test set>");
[[nodiscard]] TestSet load_test_set(std::filesystem::path const& path);

[[nodiscard]] std::string serialize_effects(std::span<EffectRecord const> records);
[[nodiscard]] std::vector<EffectRecord> parse_effects(std::string_view contents,
                                                      std::string const& source = "<effects>");
[[nodiscard]] std::vector<EffectRecord> load_effects(std::filesystem::path const& path);

}  // namespace abnirml
