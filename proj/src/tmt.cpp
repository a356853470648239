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

#include "abnirml/tmt.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

constexpr int kMaxRedraws = 64;

struct KindName {
    ManipulationKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ManipulationKind::kRemoveStopsPunct, "remove-stops-punct"},
    {ManipulationKind::kLemmatize, "lemmatize"},
    {ManipulationKind::kShuffleWords, "shuffle-words"},
    {ManipulationKind::kShuffleWordsInSents, "shuffle-words-in-sents"},
    {ManipulationKind::kShufflePrepositions, "shuffle-prepositions"},
    {ManipulationKind::kShuffleSentences, "shuffle-sentences"},
    {ManipulationKind::kSwapNounChunks, "swap-noun-chunks"},
    {ManipulationKind::kReplaceWithQuery, "replace-with-query"},
    {ManipulationKind::kAddExpansionTerms, "add-expansion-terms"},
    {ManipulationKind::kAddNonRelSentence, "add-nonrel-sentence"},
};

/// Rewrites `text` so that span positions[i] receives the content of span
/// perm[i]. Spans must be sorted and disjoint; everything else stays put.
std::string rearrange(std::string_view text, std::vector<Span> const& spans, std::vector<std::size_t> const& perm)
{
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        out.append(text.substr(pos, spans[i].begin - pos));
        out.append(spans[perm[i]].of(text));
        pos = spans[i].end;
    }
    out.append(text.substr(pos));
    return out;
}

/// Shuffles span contents within each group (groups hold indices into
/// `spans`). Redraws while the result equals the input, provided some group
/// holds two different strings.
ManipulationResult shuffle_groups(std::string_view text, std::vector<Span> const& spans,
                                  std::vector<std::vector<std::size_t>> const& groups, Rng& rng)
{
    bool changeable = false;
    for (auto const& g : groups) {
        for (std::size_t k = 1; k < g.size() && !changeable; ++k) {
            changeable = spans[g[k]].of(text) != spans[g[0]].of(text);
        }
    }
    if (!changeable) {
        return Skip{"nothing-to-shuffle"};
    }
    std::vector<std::size_t> perm(spans.size());
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        std::iota(perm.begin(), perm.end(), 0);
        for (auto const& g : groups) {
            auto members = g;
            shuffle_in_place(std::span<std::size_t>(members), rng);
            for (std::size_t k = 0; k < g.size(); ++k) {
                perm[g[k]] = members[k];
            }
        }
        auto out = rearrange(text, spans, perm);
        if (out != text) {
            return out;
        }
    }
    return Skip{"identity"};
}

std::vector<std::vector<std::size_t>> one_group(std::size_t n)
{
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {all};
}

std::vector<Span> token_spans(std::vector<Token> const& tokens)
{
    std::vector<Span> spans;
    spans.reserve(tokens.size());
    for (auto const& t : tokens) {
        spans.push_back(t.span);
    }
    return spans;
}

}  // namespace

std::string_view to_string(ManipulationKind kind)
{
    for (auto const& k : kKindNames) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "?";
}

ManipulationKind parse_manipulation(std::string_view name)
{
    std::string key(name);
    std::replace(key.begin(), key.end(), '_', '-');
    for (auto const& k : kKindNames) {
        if (k.name == key) {
            return k.kind;
        }
    }
    std::string known;
    for (auto const& k : kKindNames) {
        known += (known.empty() ? "" : ", ") + std::string(k.name);
    }
    throw ConfigError("unknown manipulation '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<ManipulationKind> all_manipulations()
{
    std::vector<ManipulationKind> out;
    for (auto const& k : kKindNames) {
        out.push_back(k.kind);
    }
    return out;
}

ExpansionMap load_expansion_map(std::filesystem::path const& path)
{
    ExpansionMap map;
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        if (trim(line).empty()) {
            return;
        }
        auto const tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError("expected docid<TAB>expansion text", path.string(), number);
        }
        auto id = std::string(trim(line.substr(0, tab)));
        auto text = nfc(trim(line.substr(tab + 1)));
        if (id.empty()) {
            throw ParseError("empty doc id", path.string(), number);
        }
        if (!map.emplace(std::move(id), std::move(text)).second) {
            throw ParseError("duplicate doc id", path.string(), number);
        }
    });
    return map;
}

ManipulationResult manipulate(Doc const& doc, ManipulationKind kind, ManipulationContext const& ctx)
{
    static RuleBasedAnnotator const kDefaultAnnotator;
    static PipelineConfig const kDefaultPipeline = PipelineConfig::defaults();
    auto const& annotator = ctx.annotator != nullptr ? *ctx.annotator : kDefaultAnnotator;
    auto const& pipeline = ctx.pipeline != nullptr ? *ctx.pipeline : kDefaultPipeline;
    std::string_view const text = doc.text;
    auto need_rng = [&]() -> Rng& {
        if (ctx.rng == nullptr) {
            throw ConfigError(std::string(to_string(kind)) + " needs a random generator");
        }
        return *ctx.rng;
    };

    auto result = [&]() -> ManipulationResult {
        switch (kind) {
        case ManipulationKind::kRemoveStopsPunct: {
            std::string out;
            for (auto const& t : tokenize(text, pipeline)) {
                if (pipeline.is_stopword(t.surface)) {
                    continue;
                }
                if (!out.empty()) {
                    out += ' ';
                }
                out.append(t.span.of(text));
            }
            if (out.empty()) {
                return Skip{"empty-result"};
            }
            return out;
        }
        case ManipulationKind::kLemmatize: {
            std::string out;
            std::size_t pos = 0;
            for (auto const& t : tokenize(text, pipeline)) {
                out.append(text.substr(pos, t.span.begin - pos));
                auto lemma = annotator.lemma(t.surface);
                out.append(lemma == t.surface ? std::string(t.span.of(text)) : lemma);
                pos = t.span.end;
            }
            out.append(text.substr(pos));
            return out;
        }
        case ManipulationKind::kShuffleWords: {
            auto const spans = token_spans(tokenize(text, pipeline));
            return shuffle_groups(text, spans, one_group(spans.size()), need_rng());
        }
        case ManipulationKind::kShuffleWordsInSents: {
            auto const spans = token_spans(tokenize(text, pipeline));
            auto const sentences = annotator.sentences(text);
            std::vector<std::vector<std::size_t>> groups(sentences.size());
            std::size_t s = 0;
            for (std::size_t i = 0; i < spans.size(); ++i) {
                while (s < sentences.size() && sentences[s].end <= spans[i].begin) {
                    ++s;
                }
                if (s < sentences.size() && sentences[s].begin <= spans[i].begin) {
                    groups[s].push_back(i);
                }
            }
            return shuffle_groups(text, spans, groups, need_rng());
        }
        case ManipulationKind::kShufflePrepositions: {
            std::vector<Span> spans;
            for (auto const& t : tokenize(text, pipeline)) {
                if (is_preposition(t.surface)) {
                    spans.push_back(t.span);
                }
            }
            if (spans.empty()) {
                return Skip{"no-prepositions"};
            }
            return shuffle_groups(text, spans, one_group(spans.size()), need_rng());
        }
        case ManipulationKind::kShuffleSentences: {
            auto const spans = annotator.sentences(text);
            if (spans.size() < 2) {
                return Skip{"single-sentence"};
            }
            return shuffle_groups(text, spans, one_group(spans.size()), need_rng());
        }
        case ManipulationKind::kSwapNounChunks: {
            auto const spans = annotator.noun_chunks(text);
            if (spans.size() < 2) {
                return Skip{"fewer-than-two-noun-chunks"};
            }
            return shuffle_groups(text, spans, one_group(spans.size()), need_rng());
        }
        case ManipulationKind::kReplaceWithQuery:
            return std::string(ctx.query);
        case ManipulationKind::kAddExpansionTerms: {
            if (ctx.expansions == nullptr) {
                throw ConfigError("add-expansion-terms needs an expansion file");
            }
            auto it = ctx.expansions->find(doc.id);
            if (it == ctx.expansions->end() || trim(it->second).empty()) {
                return Skip{"no-expansion"};
            }
            return doc.text + " " + it->second;
        }
        case ManipulationKind::kAddNonRelSentence: {
            if (ctx.nonrel_pool == nullptr || ctx.nonrel_pool->empty()) {
                return Skip{"empty-nonrel-pool"};
            }
            auto const& pool = *ctx.nonrel_pool;
            return doc.text + " " + pool[need_rng().below(pool.size())];
        }
        }
        throw ConfigError("unhandled manipulation kind");
    }();

    if (auto const* out = std::get_if<std::string>(&result); out != nullptr && *out == doc.text) {
        return Skip{"identity"};
    }
    return result;
}

TestSet build_tmt(ManipulationKind kind, Qrels const& qrels, Collection const& collection, QuerySet const& queries,
                  PipelineConfig const& config, TmtOptions const& options)
{
    static RuleBasedAnnotator const kDefaultAnnotator;
    auto const* annotator = options.annotator != nullptr ? options.annotator : &kDefaultAnnotator;
    if (kind == ManipulationKind::kAddExpansionTerms && options.expansions == nullptr) {
        throw ConfigError("add-expansion-terms needs an expansion file");
    }

    auto const query_ids = qrels.query_ids();
    std::vector<std::string> missing;
    for (auto const& qid : query_ids) {
        if (queries.find(qid) == nullptr) {
            missing.push_back("query " + qid);
        }
        for (auto const& j : qrels.for_query(qid)) {
            if (collection.find(j.doc_id) == nullptr) {
                missing.push_back("doc " + j.doc_id);
            }
        }
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
            list += (i ? ", " : "") + missing[i];
        }
        throw ValidationError("qrels reference unknown ids: " + list +
                              (missing.size() > 20 ? ", ... (" + std::to_string(missing.size()) + " in total)" : ""));
    }

    std::vector<std::vector<PairSample>> per_query(query_ids.size());
    std::vector<std::map<std::string, std::size_t>> skips(query_ids.size());
    parallel_for(query_ids.size(), options.jobs, [&](std::size_t qi) {
        auto const& query = *queries.find(query_ids[qi]);
        auto const& judgments = qrels.for_query(query.id);

        // rel=0 sentences of this query, by doc id then position.
        std::vector<std::pair<std::string, std::vector<std::string>>> nonrel_docs;
        if (kind == ManipulationKind::kAddNonRelSentence) {
            for (auto const& j : judgments) {
                if (j.grade != 0) {
                    continue;
                }
                auto const& text = collection.find(j.doc_id)->text;
                std::vector<std::string> sentences;
                for (auto const& span : annotator->sentences(text)) {
                    sentences.emplace_back(span.of(text));
                }
                nonrel_docs.emplace_back(j.doc_id, std::move(sentences));
            }
            std::sort(nonrel_docs.begin(), nonrel_docs.end());
        }

        for (auto const& j : judgments) {
            auto const& doc = *collection.find(j.doc_id);
            Rng rng(options.seed ^ fnv1a64_fields({query.id, doc.id}));
            std::vector<std::string> pool;
            for (auto const& [id, sentences] : nonrel_docs) {
                if (id != doc.id) {
                    pool.insert(pool.end(), sentences.begin(), sentences.end());
                }
            }
            ManipulationContext ctx{query.text, &rng, options.expansions, &pool, &config, annotator};
            auto result = manipulate(doc, kind, ctx);
            if (auto const* skip = std::get_if<Skip>(&result)) {
                ++skips[qi][skip->reason];
                continue;
            }
            PairSample s{query, Doc{doc.id, std::get<std::string>(std::move(result))}, doc, {}};
            s.meta["grade"] = std::to_string(j.grade);
            s.meta["kind"] = std::string(to_string(kind));
            per_query[qi].push_back(std::move(s));
        }
    });

    TestSet test;
    test.id = "tmt:" + std::string(to_string(kind));
    test.strategy = Strategy::kTmt;
    for (auto& part : per_query) {
        std::move(part.begin(), part.end(), std::back_inserter(test.samples));
    }
    canonical_sort(test.samples);
    std::map<std::string, std::size_t> skipped;
    for (auto const& m : skips) {
        for (auto const& [reason, count] : m) {
            skipped[reason] += count;
        }
    }
    test.provenance = {
        {"builder", "tmt"},
        {"kind", to_string(kind)},
        {"seed", options.seed},
        {"prng", Rng::kName},
        {"stopwords_sha256", config.stopwords_digest()},
        {"judgments", qrels.size()},
        {"skipped", skipped},
    };
    return test;
}

}  // namespace abnirml
