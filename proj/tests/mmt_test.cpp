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

#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "abnirml/error.hpp"
#include "abnirml/mmt.hpp"
#include "mmt_oracle.hpp"
#include "test_support.hpp"

namespace abnirml {
namespace {

using namespace testing::mmt;

TEST(MmtSpecTest, RejectsPairsThatCannotMatch)
{
    for (auto v : kAll) {
        for (auto c : kAll) {
            MmtSpec const spec{v, c, {}};
            if (valid_pair(v, c)) {
                EXPECT_NO_THROW(spec.validate());
            } else {
                EXPECT_THROW(spec.validate(), ConfigError) << to_string(v) << "|" << to_string(c);
            }
        }
    }
    EXPECT_EQ((MmtSpec{Characteristic::kTf, Characteristic::kLength, {}}.test_id()), "mmt:tf|length");
}

TEST(MmtSpecTest, ToleranceAssignments)
{
    Tolerances t;
    set_tolerance(t, "length=2");
    set_tolerance(t, "overlap=1e-3");
    EXPECT_EQ(t.length, 2);
    EXPECT_EQ(t.overlap, 1e-3);
    EXPECT_THROW(set_tolerance(t, "length=-1"), ConfigError);
    EXPECT_THROW(set_tolerance(t, "colour=2"), ConfigError);
    EXPECT_THROW(set_tolerance(t, "length"), ConfigError);
}

TEST(BuildMmt, ThreeDocumentExample)
{
    Fixture f;
    f.queries.insert(Query{"q1", "cat"});
    f.doc("q1", "X", 3, "cat cat dog bird fish");
    f.doc("q1", "Y", 1, "cat cat tree dog fish");
    f.doc("q1", "Z", 1, "cat cat dog bird fish tree wolf");
    auto const config = PipelineConfig::defaults();

    auto const rel = build_mmt({Characteristic::kRelevance, Characteristic::kLength, {}}, f.qrels, f.collection,
                               f.queries, config);
    ASSERT_EQ(rel.samples.size(), 1U);
    EXPECT_EQ(rel.samples[0].d1.id, "X");
    EXPECT_EQ(rel.samples[0].d2.id, "Y");
    EXPECT_EQ(rel.samples[0].meta.at("d1_grade"), "3");
    EXPECT_EQ(rel.strategy, Strategy::kMmt);
    EXPECT_EQ(rel.id, "mmt:relevance|length");

    auto const tf = build_mmt({Characteristic::kTf, Characteristic::kLength, {}}, f.qrels, f.collection, f.queries,
                              config);
    EXPECT_TRUE(tf.samples.empty());
}

TEST(BuildMmt, UnknownDocumentsAreListed)
{
    Fixture f;
    f.queries.insert(Query{"q1", "cat"});
    f.doc("q1", "A", 1, "cat");
    f.qrels.insert(Judgment{"q1", "ghost-1", 0});
    f.qrels.insert(Judgment{"q1", "ghost-2", 0});
    try {
        (void)build_mmt({}, f.qrels, f.collection, f.queries, PipelineConfig::defaults());
        FAIL();
    } catch (ValidationError const& e) {
        EXPECT_NE(std::string(e.what()).find("ghost-1"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("ghost-2"), std::string::npos);
    }
}

TEST(BuildMmt, MatchesExhaustiveOracle)
{
    std::mt19937_64 gen(99);
    auto const config = PipelineConfig::defaults();
    std::size_t mismatches = 0;
    std::size_t total = 0;
    for (int instance = 0; instance < 100; ++instance) {
        auto const f = random_instance(gen);
        Tolerances tol;
        tol.relevance = static_cast<std::int64_t>(gen() % 2);
        tol.length = static_cast<std::int64_t>(gen() % 2);
        tol.tf = static_cast<std::int64_t>(gen() % 2);
        tol.sum_tf = static_cast<std::int64_t>(gen() % 2);
        tol.overlap = gen() % 2 ? 1e-6 : 0.049;
        for (auto v : kAll) {
            for (auto c : kAll) {
                if (!valid_pair(v, c)) {
                    continue;
                }
                MmtSpec const spec{v, c, tol};
                auto const built = build_mmt(spec, f.qrels, f.collection, f.queries, config);
                std::vector<Key> got;
                for (auto const& s : built.samples) {
                    got.emplace_back(s.query.id, s.d1.id, s.d2.id);
                }
                auto const want = oracle_build(spec, f);
                total += want.size();
                if (got != want) {
                    ++mismatches;
                    ADD_FAILURE() << "instance " << instance << " " << spec.test_id() << ": got " << got.size()
                                  << " samples, oracle " << want.size();
                }
            }
        }
    }
    EXPECT_EQ(mismatches, 0U);
    EXPECT_GT(total, 1000U);  // the instances are not trivially empty
}

TEST(BuildMmt, EverySampleSurvivesRemeasurement)
{
    auto const corpus = testing::make_corpus(17, {300, 8, 40, 10, 10});
    auto const config = PipelineConfig::defaults();
    for (auto v : kAll) {
        for (auto c : kAll) {
            if (!valid_pair(v, c)) {
                continue;
            }
            MmtSpec const spec{v, c, {}};
            auto const test = build_mmt(spec, corpus.qrels, corpus.collection, corpus.queries, config);
            EXPECT_TRUE(is_canonical(test.samples));
            for (auto const& s : test.samples) {
                int g1 = -1;
                int g2 = -1;
                for (auto const& j : corpus.qrels.for_query(s.query.id)) {
                    g1 = j.doc_id == s.d1.id ? j.grade : g1;
                    g2 = j.doc_id == s.d2.id ? j.grade : g2;
                }
                ASSERT_GE(g1, 0);
                ASSERT_GE(g2, 0);
                auto const a = measure(s.query.text, s.d1.text, g1, config);
                auto const b = measure(s.query.text, s.d2.text, g2, config);
                EXPECT_TRUE(controls_match(c, a, b, spec.tolerances));
                EXPECT_EQ(variable_order(v, a, b, spec.tolerances), 1);
                EXPECT_EQ(s.meta.at("d1_grade"), std::to_string(g1));
            }
        }
    }
}

TEST(BuildMmt, IndependentOfWorkerCount)
{
    auto const corpus = testing::make_corpus(23, {400, 12, 40, 10, 10});
    auto const config = PipelineConfig::defaults();
    MmtSpec const spec{Characteristic::kRelevance, Characteristic::kLength, {}};
    auto const one = build_mmt(spec, corpus.qrels, corpus.collection, corpus.queries, config, 1);
    auto const four = build_mmt(spec, corpus.qrels, corpus.collection, corpus.queries, config, 4);
    EXPECT_FALSE(one.samples.empty());
    EXPECT_EQ(one, four);
    EXPECT_EQ(serialize_test_set(one), serialize_test_set(four));
}

TEST(BuildMmt, TfOverLengthIsUnanimousForBm25)
{
    auto const corpus = testing::make_corpus(5);
    auto const config = PipelineConfig::defaults();
    auto const stats = compute_stats(corpus.collection, config);
    auto const test = build_mmt({Characteristic::kTf, Characteristic::kLength, {}}, corpus.qrels,
                                corpus.collection, corpus.queries, config);
    ASSERT_FALSE(test.samples.empty());
    Bm25Scorer scorer(stats, config);
    auto const effects = evaluate(test, scorer, 0.0);
    EXPECT_EQ(summary_score(effects), 1.0);
}

}  // namespace
}  // namespace abnirml
