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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "abnirml/dtt.hpp"
#include "abnirml/error.hpp"
#include "test_support.hpp"

namespace abnirml {
namespace {

PipelineConfig const& pipeline()
{
    static PipelineConfig const config = PipelineConfig::defaults();
    return config;
}

TextPairRecord record(std::string id, std::string d1, std::string d2)
{
    return TextPairRecord{std::move(id), std::move(d1), std::move(d2), {}, {}, {}, {}};
}

TEST(Fluency, SingleSharedChunkBecomesTheQuery)
{
    std::vector<TextPairRecord> pairs = {record("s1", "the quick fix worked", "the quick fix work good")};
    pairs[0].spellchecked = true;
    auto const test = build_fluency(pairs, pipeline(), {42, nullptr});
    ASSERT_EQ(test.samples.size(), 1U);
    auto const& s = test.samples[0];
    EXPECT_EQ(s.query.text, "the quick fix");
    EXPECT_EQ(s.d1.text, "the quick fix worked");
    EXPECT_EQ(s.d2.text, "the quick fix work good");
    EXPECT_EQ(s.meta.at("source_id"), "s1");
    EXPECT_EQ(s.meta.at("spellchecked"), "true");
    EXPECT_EQ(test.id, "dtt:fluency");
    EXPECT_EQ(test.strategy, Strategy::kDtt);
}

TEST(Fluency, PairsWithoutASharedChunkAreDiscarded)
{
    std::vector<TextPairRecord> const pairs = {record("s1", "A red car stopped.", "Blue bikes goes fast.")};
    auto const test = build_fluency(pairs, pipeline(), {});
    EXPECT_TRUE(test.samples.empty());
    EXPECT_EQ(test.provenance.at("discarded").at("no-shared-noun-chunk"), 1);
}

TEST(Fluency, ChunkChoiceIsSeededAndAlwaysShared)
{
    RuleBasedAnnotator const annotator;
    std::vector<TextPairRecord> pairs;
    for (int i = 0; i < 50; ++i) {
        pairs.push_back(record("src" + std::to_string(i), "The red car hit the old tree near a small house.",
                               "the red car hitted The Old Tree near the small house"));
    }
    auto const a = build_fluency(pairs, pipeline(), {1, nullptr});
    auto const b = build_fluency(pairs, pipeline(), {1, nullptr});
    EXPECT_EQ(serialize_test_set(a), serialize_test_set(b));
    std::set<std::string> chosen;
    for (auto const& s : a.samples) {
        auto const shared = shared_noun_chunks(s.d1.text, s.d2.text, annotator);
        EXPECT_NE(std::find(shared.begin(), shared.end(), s.query.text), shared.end());
        chosen.insert(s.query.text);
    }
    EXPECT_GT(chosen.size(), 1U);
}

TEST(SharedChunks, CaseInsensitiveSubstrings)
{
    RuleBasedAnnotator const annotator;
    EXPECT_EQ(shared_noun_chunks("The Red Car hit two old trees.", "a crash: the red car stopped", annotator),
              (std::vector<std::string>{"the red car"}));
}

std::unordered_map<std::string, std::string> l6_for(std::vector<std::pair<std::string, std::string>> const& entries)
{
    std::unordered_map<std::string, std::string> index;
    for (auto const& [text, title] : entries) {
        index.emplace(l6_key(text), title);
    }
    return index;
}

TEST(Formality, LinkedAndOverlappingRecordsAreKept)
{
    std::vector<TextPairRecord> pairs = {
        record("f1", "I would repair my bike myself.", "id fix my bikes myself lol"),
        record("f2", "My bike needs service.", "unlinked informal text"),
        record("f3", "Please see a doctor.", "go see a doc"),
    };
    pairs[0].category = "family";
    auto const index = l6_for({{"id fix my bikes myself lol", "how do I fix my bike"},
                               {"Please see a doctor.", "how do i fix my bike"}});
    auto const test = build_formality(pairs, index, pipeline(), {});
    ASSERT_EQ(test.samples.size(), 1U);
    EXPECT_EQ(test.samples[0].query.text, "how do I fix my bike");
    EXPECT_EQ(test.samples[0].meta.at("category"), "family");
    EXPECT_EQ(test.samples[0].meta.at("linked_via"), "d2");
    EXPECT_EQ(test.provenance.at("discarded").at("unlinked"), 1);
    EXPECT_EQ(test.provenance.at("discarded").at("no-shared-query-lemma"), 1);
}

TEST(Formality, KeyIgnoresSurroundingWhitespace)
{
    EXPECT_EQ(l6_key("  text here \n"), l6_key("text here"));
    EXPECT_NE(l6_key("text here"), l6_key("Text here"));
}

TEST(QueryLemmas, NeedsOverlapWithBothSides)
{
    RuleBasedAnnotator const annotator;
    EXPECT_TRUE(shares_query_lemma("running shoes", "she runs", "a run", pipeline(), annotator));
    EXPECT_FALSE(shares_query_lemma("running shoes", "she runs", "a walk", pipeline(), annotator));
    EXPECT_FALSE(shares_query_lemma("the of", "the of", "the of", pipeline(), annotator));
}

std::vector<TextPairRecord> articles(std::size_t n)
{
    std::vector<TextPairRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = record("art" + std::to_string(i), "Storms hit the coast.", "Heavy storms hit the coast overnight.");
        r.title = i % 10 == 0 ? "Markets rally" : "Storm damage on the coast";
        r.category = i % 2 ? "cnn" : "dailymail";
        out.push_back(std::move(r));
    }
    return out;
}

TEST(Summarization, FilterThenSubsample)
{
    auto const all = articles(2000);
    auto const full = build_summarization(all, 1.0, pipeline(), {3, nullptr});
    EXPECT_EQ(full.samples.size(), 1800U);
    EXPECT_EQ(full.provenance.at("discarded").at("no-shared-query-lemma"), 200);
    EXPECT_TRUE(full.samples.front().meta.contains("source"));

    auto const tenth = build_summarization(all, 0.1, pipeline(), {3, nullptr});
    // Binomial(1800, 0.1): mean 180, sd about 12.7.
    EXPECT_NEAR(static_cast<double>(tenth.samples.size()), 180.0, 5 * std::sqrt(1800 * 0.1 * 0.9));
    EXPECT_EQ(serialize_test_set(tenth), serialize_test_set(build_summarization(all, 0.1, pipeline(), {3, nullptr})));
    EXPECT_NE(serialize_test_set(tenth), serialize_test_set(build_summarization(all, 0.1, pipeline(), {4, nullptr})));
    // Every kept sample is also kept at a higher rate with the same seed.
    auto const half = build_summarization(all, 0.5, pipeline(), {3, nullptr});
    std::set<std::string> half_sources;
    for (auto const& s : half.samples) {
        half_sources.insert(s.meta.at("source_id"));
    }
    for (auto const& s : tenth.samples) {
        EXPECT_TRUE(half_sources.contains(s.meta.at("source_id")));
    }
}

TEST(Summarization, RateAndTitleValidation)
{
    auto const all = articles(3);
    for (double rate : {0.0, -0.5, 1.5, std::nan("")}) {
        EXPECT_THROW((void)build_summarization(all, rate, pipeline(), {}), ConfigError) << rate;
    }
    auto untitled = all;
    untitled[1].title.reset();
    EXPECT_THROW((void)build_summarization(untitled, 1.0, pipeline(), {}), ValidationError);
}

TEST(TextPairs, ParseAndValidate)
{
    auto const pairs = parse_text_pairs(
        "{\"source_id\":\"a\",\"d1_text\":\" Cafe\\u0301 \",\"d2_text\":\"x\",\"category\":\"cnn\","
        "\"spellchecked\":false}\n\n"
        "{\"source_id\":\"b\",\"d1_text\":\"y\",\"d2_text\":\"z\",\"direction\":\"informal_to_formal\"}\n");
    ASSERT_EQ(pairs.size(), 2U);
    EXPECT_EQ(pairs[0].d1_text, "Caf\xC3\xA9");
    EXPECT_EQ(pairs[0].category, "cnn");
    EXPECT_EQ(pairs[0].spellchecked, false);
    EXPECT_EQ(pairs[1].direction, "informal_to_formal");
    EXPECT_THROW((void)parse_text_pairs("{\"source_id\":\"a\",\"d1_text\":\"\",\"d2_text\":\"x\"}\n"), ParseError);
    EXPECT_THROW((void)parse_text_pairs("[1]\n"), ParseError);
}

TEST(SampleIds, UniqueAndStable)
{
    std::vector<TextPairRecord> pairs;
    for (int i = 0; i < 4; ++i) {
        pairs.push_back(record("jfleg-7", "the quick fix worked", "the quick fix work good"));
    }
    auto const test = build_fluency(pairs, pipeline(), {});
    ASSERT_EQ(test.samples.size(), 4U);
    std::set<std::string> ids;
    for (auto const& s : test.samples) {
        ids.insert(s.query.id);
        EXPECT_TRUE(s.d1.id.ends_with("/d1"));
        EXPECT_TRUE(s.d2.id.ends_with("/d2"));
    }
    EXPECT_EQ(ids.size(), 4U);
    EXPECT_TRUE(is_canonical(test.samples));
}

}  // namespace
}  // namespace abnirml
