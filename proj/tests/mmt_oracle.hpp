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

// Exhaustive reference for the measure-and-match builder: every pair of judged
// documents is measured by plain counting and checked against the rules.

#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "abnirml/mmt.hpp"

namespace abnirml::testing::mmt {

inline Characteristic const kAll[] = {Characteristic::kRelevance, Characteristic::kLength, Characteristic::kTf,
                                      Characteristic::kSumTf, Characteristic::kOverlap};

inline bool valid_pair(Characteristic v, Characteristic c)
{
    auto const tfish = [](Characteristic x) { return x == Characteristic::kTf || x == Characteristic::kSumTf; };
    return v != c && !(tfish(v) && tfish(c));
}

struct Fixture {
    QuerySet queries;
    Collection collection;
    Qrels qrels;

    void doc(std::string const& qid, std::string const& did, int grade, std::string const& text)
    {
        collection.insert(Doc{did, text});
        qrels.insert(Judgment{qid, did, grade});
    }
};

// Documents use only these words: "the" and "of" are stopwords, the rest are
// their own stems.
inline std::vector<std::string> const kDocWords = {"cat", "dog", "bird", "fish", "tree", "the", "of"};
inline std::vector<std::string> const kQueryWords = {"cat", "dog", "bird", "the"};

struct OracleMeasure {
    int grade;
    long length = 0;
    std::map<std::string, long> tf;
    long sum_tf = 0;
};

inline OracleMeasure oracle_measure(std::string const& query, std::string const& doc, int grade)
{
    OracleMeasure m{grade};
    std::istringstream qin(query);
    for (std::string w; qin >> w;) {
        if (w != "the" && w != "of") {
            m.tf[w] = 0;
        }
    }
    std::istringstream din(doc);
    for (std::string w; din >> w;) {
        if (w == "the" || w == "of") {
            continue;
        }
        ++m.length;
        if (auto it = m.tf.find(w); it != m.tf.end()) {
            ++it->second;
            ++m.sum_tf;
        }
    }
    return m;
}

/// a/b - c/d, exactly as a fraction converted once.
inline long double gap(long a, long b, long c, long d)
{
    return static_cast<long double>(a * d - c * b) / static_cast<long double>(b * d);
}

inline bool oracle_match(Characteristic c, OracleMeasure const& x, OracleMeasure const& y, Tolerances const& t)
{
    switch (c) {
    case Characteristic::kRelevance:
        return std::abs(x.grade - y.grade) <= t.relevance;
    case Characteristic::kLength:
        return std::abs(x.length - y.length) <= t.length;
    case Characteristic::kSumTf:
        return std::abs(x.sum_tf - y.sum_tf) <= t.sum_tf;
    case Characteristic::kTf:
        for (auto const& [term, n] : x.tf) {
            if (std::abs(n - y.tf.at(term)) > t.tf) {
                return false;
            }
        }
        return true;
    case Characteristic::kOverlap:
        return std::fabs(gap(x.sum_tf, x.length, y.sum_tf, y.length)) <= t.overlap;
    }
    return false;
}

/// +1 when x is above y on the variable.
inline int oracle_order(Characteristic v, OracleMeasure const& x, OracleMeasure const& y, Tolerances const& t)
{
    auto sign = [](long d) { return d > 0 ? 1 : (d < 0 ? -1 : 0); };
    switch (v) {
    case Characteristic::kRelevance:
        return sign(x.grade - y.grade);
    case Characteristic::kLength:
        return sign(x.length - y.length);
    case Characteristic::kSumTf:
        return sign(x.sum_tf - y.sum_tf);
    case Characteristic::kTf: {
        bool ge = true;
        bool le = true;
        for (auto const& [term, n] : x.tf) {
            ge = ge && n >= y.tf.at(term);
            le = le && n <= y.tf.at(term);
        }
        return ge && !le ? 1 : (le && !ge ? -1 : 0);
    }
    case Characteristic::kOverlap: {
        auto const g = gap(x.sum_tf, x.length, y.sum_tf, y.length);
        return g > t.overlap ? 1 : (g < -t.overlap ? -1 : 0);
    }
    }
    return 0;
}

using Key = std::tuple<std::string, std::string, std::string>;

inline std::vector<Key> oracle_build(MmtSpec const& spec, Fixture const& f)
{
    bool const needs_length = spec.variable == Characteristic::kLength || spec.control == Characteristic::kLength ||
                              spec.variable == Characteristic::kOverlap || spec.control == Characteristic::kOverlap;
    std::set<Key> out;
    for (auto const& qid : f.qrels.query_ids()) {
        auto const& judged = f.qrels.for_query(qid);
        auto const& qtext = f.queries.find(qid)->text;
        for (std::size_t i = 0; i < judged.size(); ++i) {
            for (std::size_t j = i + 1; j < judged.size(); ++j) {
                auto const a = oracle_measure(qtext, f.collection.find(judged[i].doc_id)->text, judged[i].grade);
                auto const b = oracle_measure(qtext, f.collection.find(judged[j].doc_id)->text, judged[j].grade);
                if (needs_length && (a.length == 0 || b.length == 0)) {
                    continue;
                }
                if (!oracle_match(spec.control, a, b, spec.tolerances)) {
                    continue;
                }
                int const o = oracle_order(spec.variable, a, b, spec.tolerances);
                if (o > 0) {
                    out.emplace(qid, judged[i].doc_id, judged[j].doc_id);
                } else if (o < 0) {
                    out.emplace(qid, judged[j].doc_id, judged[i].doc_id);
                }
            }
        }
    }
    return {out.begin(), out.end()};
}

inline Fixture random_instance(std::mt19937_64& gen)
{
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(gen() % n); };
    Fixture f;
    auto const nq = 1 + pick(20);
    std::size_t next_doc = 0;
    for (std::size_t q = 0; q < nq; ++q) {
        auto const qid = "q" + std::to_string(q);
        std::string qtext;
        for (std::size_t t = 0, n = 1 + pick(3); t < n; ++t) {
            qtext += (t ? " " : "") + kQueryWords[pick(kQueryWords.size())];
        }
        f.queries.insert(Query{qid, qtext});
        for (std::size_t d = 0, n = 1 + pick(8); d < n; ++d) {
            std::string text;
            for (std::size_t w = 0, len = pick(7); w < len; ++w) {
                text += (w ? " " : "") + kDocWords[pick(kDocWords.size())];
            }
            // Ids deliberately not in qrels order.
            auto const did = "d" + std::to_string((next_doc++ * 7919) % 1000);
            f.doc(qid, did, static_cast<int>(pick(4)), text);
        }
    }
    return f;
}

}  // namespace abnirml::testing::mmt
