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
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "abnirml/corpus.hpp"
#include "abnirml/pairtest.hpp"
#include "abnirml/textproc.hpp"

namespace abnirml {

enum class ManipulationKind {
    kRemoveStopsPunct,
    kLemmatize,
    kShuffleWords,
    kShuffleWordsInSents,
    kShufflePrepositions,
    kShuffleSentences,
    kSwapNounChunks,
    kReplaceWithQuery,
    kAddExpansionTerms,
    kAddNonRelSentence,
};

[[nodiscard]] std::string_view to_string(ManipulationKind kind);
/// Accepts the names printed by to_string, e.g. "shuffle-words".
[[nodiscard]] ManipulationKind parse_manipulation(std::string_view name);
[[nodiscard]] std::vector<ManipulationKind> all_manipulations();

/// docid -> expansion text.
using ExpansionMap = std::unordered_map<std::string, std::string>;
[[nodiscard]] ExpansionMap load_expansion_map(std::filesystem::path const& path);

struct ManipulationContext {
    std::string_view query;
    Rng* rng = nullptr;
    ExpansionMap const* expansions = nullptr;
    /// Sentences of the query's rel=0 documents.
    std::vector<std::string> const* nonrel_pool = nullptr;
    PipelineConfig const* pipeline = nullptr;
    Annotator const* annotator = nullptr;
};

/// Why a document produced no sample.
struct Skip {
    std::string reason;
};

using ManipulationResult = std::variant<std::string, Skip>;

/// Returns the manipulated text, or Skip when the manipulation cannot change
/// this document. Shuffles redraw a bounded number of times before giving up
/// on an identity permutation.
[[nodiscard]] ManipulationResult manipulate(Doc const& doc, ManipulationKind kind, ManipulationContext const& ctx);

struct TmtOptions {
    std::uint64_t seed = 0;
    ExpansionMap const* expansions = nullptr;
    Annotator const* annotator = nullptr;  ///< rule-based when null
    std::size_t jobs = 1;
};

/// One sample per judged (query, doc): d1 = manipulated text, d2 = original.
/// Both keep the original doc id. Each sample draws from its own generator
/// seeded with seed ^ fnv1a64_fields({query_id, doc_id}).
[[nodiscard]] TestSet build_tmt(ManipulationKind kind, Qrels const& qrels, Collection const& collection,
                                QuerySet const& queries, PipelineConfig const& config, TmtOptions const& options);

}  // namespace abnirml
