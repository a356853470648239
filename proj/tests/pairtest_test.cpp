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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "abnirml/error.hpp"
#include "abnirml/pairtest.hpp"

namespace abnirml {
namespace {

TEST(Effect, DirectCases)
{
    EXPECT_EQ(effect(1.6, 1.0, 0.5), 1);
    EXPECT_EQ(effect(1.5, 1.0, 0.5), 0);  // boundary is neutral
    EXPECT_EQ(effect(0.2, 1.0, 0.5), -1);
    EXPECT_EQ(effect(1.0, 1.0, 0.0), 0);
    EXPECT_EQ(effect(1.0, 0.999, 0.0), 1);
}

TEST(Effect, RejectsNonFiniteInput)
{
    auto const nan = std::numeric_limits<double>::quiet_NaN();
    auto const inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW((void)effect(nan, 1.0, 0.0), ValidationError);
    EXPECT_THROW((void)effect(1.0, inf, 0.0), ValidationError);
    EXPECT_THROW((void)effect(1.0, 1.0, -0.1), ValidationError);
    EXPECT_THROW((void)effect(1.0, 1.0, nan), ValidationError);
}

TEST(SummaryScore, Mean)
{
    EXPECT_DOUBLE_EQ(summary_score(std::vector<int>{1, -1, 0, 1}), 0.25);
    EXPECT_DOUBLE_EQ(summary_score(std::vector<int>(7, 1)), 1.0);
    EXPECT_THROW((void)summary_score(std::vector<int>{}), ValidationError);
}

TEST(Effect, RandomizedProperties)
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> score(-5.0, 5.0);
    std::uniform_real_distribution<double> gap(0.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        // Draw from a coarse grid half the time so exact ties and exact
        // boundary hits actually occur.
        double a = score(gen);
        double b = score(gen);
        double d = gap(gen);
        if (i % 2 == 0) {
            a = std::round(a * 4) / 4;
            b = std::round(b * 4) / 4;
            d = std::round(d * 4) / 4;
        }
        ASSERT_EQ(effect(a, b, d), -effect(b, a, d));
        ASSERT_EQ(effect(a, a, d), 0);
        if (std::fabs(a - b) == d) {
            ASSERT_EQ(effect(a, b, d), 0);
        }
        ASSERT_EQ(effect(a, b, 0.0), a > b ? 1 : (a < b ? -1 : 0));
        if (effect(a, b, d) == 0) {
            ASSERT_EQ(effect(a, b, d + gap(gen)), 0);
        }
    }
}

TestSet small_test()
{
    TestSet t;
    t.id = "unit";
    t.strategy = Strategy::kTmt;
    t.samples.push_back({{"q1", "apple"}, {"d1", "apple apple pie"}, {"d2", "pie"}, {{"grade", "2"}}});
    t.samples.push_back({{"q1", "apple"}, {"d3", "pie"}, {"d2", "pie"}, {}});
    t.samples.push_back({{"q2", "pie"}, {"d1", "apple apple pie"}, {"d4", "pie pie"}, {}});
    t.provenance = {{"builder", "unit"}, {"seed", 3}};
    return t;
}

/// Score = number of characters of the doc equal to the first query char;
/// counts how many requests it receives.
class CountingScorer final : public Scorer {
  public:
    [[nodiscard]] std::string const& id() const override { return m_id; }
    std::vector<double> score_batch(std::span<ScoreRequest const> requests) override
    {
        std::vector<double> out;
        for (auto const& r : requests) {
            ++calls;
            out.push_back(static_cast<double>(std::count(r.doc.begin(), r.doc.end(), r.query.front())));
        }
        return out;
    }
    std::size_t calls = 0;

  private:
    std::string m_id = "counting";
};

TEST(Evaluate, OneRecordPerSampleInOrderAndDeduplicated)
{
    auto const test = small_test();
    CountingScorer scorer;
    auto const records = evaluate(test, scorer, 0.5);
    ASSERT_EQ(records.size(), 3U);
    EXPECT_EQ(records[0].score1, 2.0);
    EXPECT_EQ(records[0].score2, 0.0);
    EXPECT_EQ(records[0].effect, 1);
    EXPECT_EQ(records[1].effect, 0);
    EXPECT_EQ(records[2].d2_id, "d4");
    // (apple, "pie") is shared by two samples and scored once.
    EXPECT_EQ(scorer.calls, 4U);
    EXPECT_EQ(evaluate(test, scorer, 0.5), records);
}

TEST(Evaluate, SwappingRolesNegatesEveryEffect)
{
    std::mt19937 gen(8);
    TestSet test;
    test.id = "swap";
    for (int i = 0; i < 300; ++i) {
        auto const n1 = gen() % 6;
        auto const n2 = gen() % 6;
        test.samples.push_back({{"q" + std::to_string(i), "x"},
                                {"a", std::string(n1, 'x') + "y"},
                                {"b", std::string(n2, 'x') + "z"},
                                {}});
    }
    auto swapped = test;
    for (auto& s : swapped.samples) {
        std::swap(s.d1, s.d2);
    }
    CountingScorer scorer;
    for (double delta : {0.0, 1.0, 2.5}) {
        auto const fwd = evaluate(test, scorer, delta);
        auto const back = evaluate(swapped, scorer, delta);
        ASSERT_EQ(fwd.size(), back.size());
        for (std::size_t i = 0; i < fwd.size(); ++i) {
            EXPECT_EQ(fwd[i].effect, -back[i].effect);
        }
        EXPECT_DOUBLE_EQ(summary_score(fwd), -summary_score(back));
    }
}

TEST(Evaluate, RejectsBadDelta)
{
    CountingScorer scorer;
    EXPECT_THROW((void)evaluate(small_test(), scorer, -1.0), ConfigError);
}

TEST(CanonicalOrder, SortsByQueryThenDocIds)
{
    auto t = small_test();
    std::reverse(t.samples.begin(), t.samples.end());
    EXPECT_FALSE(is_canonical(t.samples));
    canonical_sort(t.samples);
    EXPECT_TRUE(is_canonical(t.samples));
    EXPECT_EQ(t.samples.front().d1.id, "d1");
    EXPECT_EQ(t.samples.back().query.id, "q2");
}

TEST(JsonLines, TestSetRoundTrip)
{
    auto const test = small_test();
    auto const text = serialize_test_set(test);
    EXPECT_EQ(parse_test_set(text), test);
    EXPECT_EQ(serialize_test_set(parse_test_set(text)), text);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(JsonLines, EffectsRoundTripExactly)
{
    std::vector<EffectRecord> const records = {{"q", "a", "b", 0.1, 1.0 / 3.0, -1}, {"q", "c", "d", 1e-300, 2, 1}};
    EXPECT_EQ(parse_effects(serialize_effects(records)), records);
}

TEST(JsonLines, ReportsLineNumbers)
{
    auto const header = serialize_test_set(TestSet{"t", Strategy::kDtt, {}, {}});
    try {
        (void)parse_test_set(header + "{\"test_id\":\"t\"}\n", "x.jsonl");
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 2U);
    }
    EXPECT_THROW((void)parse_test_set("", "x"), ParseError);
    EXPECT_THROW((void)parse_effects("{\"query_id\":\"q\",\"d1_id\":\"a\",\"d2_id\":\"b\",\"score1\":1,\"score2\":1,"
                                     "\"effect\":2}\n"),
                 ParseError);
}

}  // namespace
}  // namespace abnirml
