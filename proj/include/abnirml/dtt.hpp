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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "abnirml/pairtest.hpp"
#include "abnirml/textproc.hpp"

namespace abnirml {

/// One record of a normalized paired-text dataset. d1 is the preferred side
/// (fluent, formal, summary), d2 the other (disfluent, informal, body).
struct TextPairRecord {
    std::string source_id;
    std::string d1_text;
    std::string d2_text;
    std::optional<std::string> category;
    std::optional<std::string> title;
    std::optional<bool> spellchecked;
    /// Free-form rewrite direction tag, e.g. "informal_to_formal".
    std::optional<std::string> direction;

    friend bool operator==(TextPairRecord const&, TextPairRecord const&) = default;
};

/// JSON lines {"source_id","d1_text","d2_text","category"?,"title"?,
/// "spellchecked"?,"direction"?}. Texts are NFC-normalized and must be
/// non-empty.
[[nodiscard]] std::vector<TextPairRecord> load_text_pairs(std::filesystem::path const& path);
[[nodiscard]] std::vector<TextPairRecord> parse_text_pairs(std::string_view contents,
                                                           std::string const& source = "<pairs>");

/// Key used to link a text to its originating question: SHA-256 of the
/// trimmed NFC text.
[[nodiscard]] std::string l6_key(std::string_view text);
/// TSV `key<TAB>title`.
[[nodiscard]] std::unordered_map<std::string, std::string> load_l6_index(std::filesystem::path const& path);

struct DttOptions {
    std::uint64_t seed = 0;
    Annotator const* annotator = nullptr;  ///< rule-based when null
};

/// Lowercased noun chunks found in either text that occur (case-insensitively)
/// in both, sorted and de-duplicated.
[[nodiscard]] std::vector<std::string> shared_noun_chunks(std::string_view a, std::string_view b,
                                                          Annotator const& annotator);

/// True when some non-stopword query lemma occurs among the lemmas of both
/// documents.
[[nodiscard]] bool shares_query_lemma(std::string_view query, std::string_view d1, std::string_view d2,
                                      PipelineConfig const& config, Annotator const& annotator);

/// q = a shared noun chunk chosen at random; records without one are dropped.
[[nodiscard]] TestSet build_fluency(std::vector<TextPairRecord> const& pairs, PipelineConfig const& config,
                                    DttOptions const& options);
/// q = the linked question title; records that cannot be linked or share no
/// query lemma with both texts are dropped.
[[nodiscard]] TestSet build_formality(std::vector<TextPairRecord> const& pairs,
                                      std::unordered_map<std::string, std::string> const& l6_index,
                                      PipelineConfig const& config, DttOptions const& options);
/// q = title; records sharing no query lemma are dropped, then the rest are
/// kept with probability `rate`.
[[nodiscard]] TestSet build_summarization(std::vector<TextPairRecord> const& pairs, double rate,
                                          PipelineConfig const& config, DttOptions const& options);

}  // namespace abnirml
