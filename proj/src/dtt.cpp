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

#include "abnirml/dtt.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

using nlohmann::json;

Annotator const& pick(DttOptions const& options)
{
    static RuleBasedAnnotator const kDefault;
    return options.annotator != nullptr ? *options.annotator : kDefault;
}

std::string record_id(TextPairRecord const& r, std::size_t ordinal)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08zu", ordinal);
    return r.source_id + "/" + buf;
}

PairSample make_sample(TextPairRecord const& r, std::size_t ordinal, std::string query)
{
    auto const id = record_id(r, ordinal);
    PairSample s{Query{id, std::move(query)}, Doc{id + "/d1", r.d1_text}, Doc{id + "/d2", r.d2_text}, {}};
    s.meta["source_id"] = r.source_id;
    if (r.category) {
        s.meta["category"] = *r.category;
    }
    if (r.spellchecked) {
        s.meta["spellchecked"] = *r.spellchecked ? "true" : "false";
    }
    if (r.direction) {
        s.meta["direction"] = *r.direction;
    }
    return s;
}

std::unordered_set<std::string> lemma_set(std::string_view text, PipelineConfig const& config,
                                          Annotator const& annotator)
{
    std::unordered_set<std::string> out;
    for (auto const& t : tokenize(text, config)) {
        out.insert(annotator.lemma(t.surface));
    }
    return out;
}

TestSet finish(std::string id, std::vector<PairSample> samples, json provenance)
{
    TestSet test;
    test.id = std::move(id);
    test.strategy = Strategy::kDtt;
    test.samples = std::move(samples);
    canonical_sort(test.samples);
    test.provenance = std::move(provenance);
    return test;
}

std::optional<std::string> optional_string(json const& obj, char const* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    return nfc(trim(it->get<std::string>()));
}

}  // namespace

std::vector<TextPairRecord> parse_text_pairs(std::string_view contents, std::string const& source)
{
    std::vector<TextPairRecord> out;
    std::size_t pos = 0;
    std::size_t number = 0;
    while (pos < contents.size()) {
        auto nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = contents.size();
        }
        auto const line = contents.substr(pos, nl - pos);
        pos = nl + 1;
        ++number;
        if (trim(line).empty()) {
            continue;
        }
        try {
            auto const obj = json::parse(line);
            if (!obj.is_object()) {
                throw ParseError("expected a JSON object", source, number);
            }
            TextPairRecord r;
            auto text = [&](char const* key) {
                auto v = optional_string(obj, key);
                if (!v || v->empty()) {
                    throw ParseError(std::string("missing or empty '") + key + "'", source, number);
                }
                return *v;
            };
            r.source_id = text("source_id");
            r.d1_text = text("d1_text");
            r.d2_text = text("d2_text");
            r.category = optional_string(obj, "category");
            r.title = optional_string(obj, "title");
            r.direction = optional_string(obj, "direction");
            if (auto it = obj.find("spellchecked"); it != obj.end() && !it->is_null()) {
                r.spellchecked = it->get<bool>();
            }
            out.push_back(std::move(r));
        } catch (json::exception const& e) {
            throw ParseError(std::string("invalid record: ") + e.what(), source, number);
        }
    }
    return out;
}

std::vector<TextPairRecord> load_text_pairs(std::filesystem::path const& path)
{
    return parse_text_pairs(read_file(path), path.string());
}

std::string l6_key(std::string_view text)
{
    return sha256_hex(nfc(trim(text)));
}

std::unordered_map<std::string, std::string> load_l6_index(std::filesystem::path const& path)
{
    std::unordered_map<std::string, std::string> index;
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        if (trim(line).empty()) {
            return;
        }
        auto const tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError("expected key<TAB>title", path.string(), number);
        }
        auto key = lowercase(trim(line.substr(0, tab)));
        auto title = nfc(trim(line.substr(tab + 1)));
        if (key.empty() || title.empty()) {
            throw ParseError("empty key or title", path.string(), number);
        }
        if (auto [it, inserted] = index.emplace(key, title); !inserted && it->second != title) {
            throw ParseError("key maps to two different titles", path.string(), number);
        }
    });
    return index;
}

std::vector<std::string> shared_noun_chunks(std::string_view a, std::string_view b, Annotator const& annotator)
{
    auto const la = lowercase(a);
    auto const lb = lowercase(b);
    std::vector<std::string> out;
    for (auto text : {a, b}) {
        for (auto const& span : annotator.noun_chunks(text)) {
            auto chunk = lowercase(span.of(text));
            if (la.find(chunk) != std::string::npos && lb.find(chunk) != std::string::npos) {
                out.push_back(std::move(chunk));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool shares_query_lemma(std::string_view query, std::string_view d1, std::string_view d2,
                        PipelineConfig const& config, Annotator const& annotator)
{
    auto const l1 = lemma_set(d1, config, annotator);
    auto const l2 = lemma_set(d2, config, annotator);
    for (auto const& t : tokenize(query, config)) {
        if (config.is_stopword(t.surface)) {
            continue;
        }
        auto const lemma = annotator.lemma(t.surface);
        if (l1.contains(lemma) && l2.contains(lemma)) {
            return true;
        }
    }
    return false;
}

TestSet build_fluency(std::vector<TextPairRecord> const& pairs, PipelineConfig const& config,
                      DttOptions const& options)
{
    auto const& annotator = pick(options);
    std::vector<PairSample> samples;
    std::size_t discarded = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto const& r = pairs[i];
        auto const chunks = shared_noun_chunks(r.d1_text, r.d2_text, annotator);
        if (chunks.empty()) {
            ++discarded;
            continue;
        }
        Rng rng(options.seed ^ fnv1a64_fields({r.source_id}));
        samples.push_back(make_sample(r, i, chunks[rng.below(chunks.size())]));
    }
    return finish("dtt:fluency", std::move(samples),
                  {{"builder", "dtt"},
                   {"task", "fluency"},
                   {"seed", options.seed},
                   {"prng", Rng::kName},
                   {"stopwords_sha256", config.stopwords_digest()},
                   {"records", pairs.size()},
                   {"discarded", {{"no-shared-noun-chunk", discarded}}}});
}

TestSet build_formality(std::vector<TextPairRecord> const& pairs,
                        std::unordered_map<std::string, std::string> const& l6_index, PipelineConfig const& config,
                        DttOptions const& options)
{
    auto const& annotator = pick(options);
    std::vector<PairSample> samples;
    std::size_t unlinked = 0;
    std::size_t no_overlap = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto const& r = pairs[i];
        // The informal side is normally the original post; fall back to the
        // formal side for rewrites in the other direction.
        std::string linked_via = "d2";
        auto it = l6_index.find(l6_key(r.d2_text));
        if (it == l6_index.end()) {
            it = l6_index.find(l6_key(r.d1_text));
            linked_via = "d1";
        }
        if (it == l6_index.end()) {
            ++unlinked;
            continue;
        }
        if (!shares_query_lemma(it->second, r.d1_text, r.d2_text, config, annotator)) {
            ++no_overlap;
            continue;
        }
        auto s = make_sample(r, i, it->second);
        s.meta["linked_via"] = linked_via;
        samples.push_back(std::move(s));
    }
    return finish("dtt:formality", std::move(samples),
                  {{"builder", "dtt"},
                   {"task", "formality"},
                   {"stopwords_sha256", config.stopwords_digest()},
                   {"records", pairs.size()},
                   {"discarded", {{"unlinked", unlinked}, {"no-shared-query-lemma", no_overlap}}}});
}

TestSet build_summarization(std::vector<TextPairRecord> const& pairs, double rate, PipelineConfig const& config,
                            DttOptions const& options)
{
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw ConfigError("subsample rate must be in (0, 1], got " + format_double(rate));
    }
    auto const& annotator = pick(options);
    std::vector<PairSample> samples;
    std::size_t no_overlap = 0;
    std::size_t subsampled = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto const& r = pairs[i];
        if (!r.title || r.title->empty()) {
            throw ValidationError("summarization record " + r.source_id + " has no title");
        }
        if (!shares_query_lemma(*r.title, r.d1_text, r.d2_text, config, annotator)) {
            ++no_overlap;
            continue;
        }
        Rng rng(options.seed ^ fnv1a64_fields({r.source_id}));
        if (!(rng.unit() < rate)) {
            ++subsampled;
            continue;
        }
        auto s = make_sample(r, i, *r.title);
        if (r.category) {
            s.meta["source"] = *r.category;
        }
        samples.push_back(std::move(s));
    }
    return finish("dtt:summarization", std::move(samples),
                  {{"builder", "dtt"},
                   {"task", "summarization"},
                   {"seed", options.seed},
                   {"rate", rate},
                   {"prng", Rng::kName},
                   {"stopwords_sha256", config.stopwords_digest()},
                   {"records", pairs.size()},
                   {"discarded", {{"no-shared-query-lemma", no_overlap}, {"subsampled-out", subsampled}}}});
}

}  // namespace abnirml
