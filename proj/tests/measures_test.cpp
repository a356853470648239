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

#include "abnirml/error.hpp"
#include "abnirml/measures.hpp"

namespace abnirml {
namespace {

class Measures : public ::testing::Test {
  protected:
    PipelineConfig config = PipelineConfig::defaults();
};

TEST_F(Measures, LengthCountsNonStopwordTokens)
{
    EXPECT_EQ(doc_length("The cat sat on the mat.", config), 3);
    EXPECT_EQ(doc_length("the of and", config), 0);
}

TEST_F(Measures, TfVectorOverDistinctStemmedQueryTerms)
{
    auto const tf = tf_vector("running cats cat", "A cat ran; the cats were running. Cat!", config);
    ASSERT_EQ(tf.size(), 2U);
    EXPECT_EQ(tf.at("cat"), 3);
    EXPECT_EQ(tf.at("run"), 1);
    EXPECT_EQ(sum_tf(tf), 4);
    EXPECT_TRUE(tf_vector("the of", "the cat", config).empty());
}

TEST_F(Measures, OverlapIsExactRatio)
{
    auto const o = overlap("cat", "cat dog cat bird", config);
    EXPECT_EQ(o, (Ratio{2, 4}));
    EXPECT_EQ(o, (Ratio{1, 2}));
    EXPECT_LT((Ratio{1, 3}), (Ratio{1, 2}));
    EXPECT_THROW((void)overlap("cat", "the of", config), ValidationError);
}

TEST(TfDominates, ParetoOrder)
{
    TfVector const a{{"x", 2}, {"y", 1}};
    TfVector const b{{"x", 1}, {"y", 1}};
    TfVector const c{{"x", 3}, {"y", 0}};
    EXPECT_TRUE(tf_dominates(a, b));
    EXPECT_FALSE(tf_dominates(b, a));
    EXPECT_FALSE(tf_dominates(a, a));
    EXPECT_FALSE(tf_dominates(a, c));
    EXPECT_FALSE(tf_dominates(c, a));
    EXPECT_THROW((void)tf_dominates(a, TfVector{{"x", 1}}), ValidationError);
}

TEST(Characteristic, ParseNames)
{
    EXPECT_EQ(parse_characteristic("rel"), Characteristic::kRelevance);
    EXPECT_EQ(parse_characteristic("Sum-TF"), Characteristic::kSumTf);
    EXPECT_EQ(parse_characteristic("overlap"), Characteristic::kOverlap);
    EXPECT_THROW((void)parse_characteristic("proximity"), ConfigError);
    for (auto c : {Characteristic::kRelevance, Characteristic::kLength, Characteristic::kTf, Characteristic::kSumTf,
                   Characteristic::kOverlap}) {
        EXPECT_EQ(parse_characteristic(to_string(c)), c);
    }
}

TEST_F(Measures, MeasureBundlesEverything)
{
    auto const m = measure("cat", "The cat chased another cat.", 2, config);
    EXPECT_EQ(m.relevance, 2);
    EXPECT_EQ(m.length, 3);  // "another" is a stopword
    EXPECT_EQ(m.sum_tf, 2);
    EXPECT_EQ(m.overlap(), (Ratio{2, 3}));
    EXPECT_FALSE(m.degenerate());
}

}  // namespace
}  // namespace abnirml
