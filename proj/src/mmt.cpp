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

#include "abnirml/mmt.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

bool involves(MmtSpec const& spec, Characteristic c)
{
    return spec.variable == c || spec.control == c;
}

/// Exact a - b as long double; numerators are exact 64-bit products.
long double overlap_gap(Ratio a, Ratio b)
{
    auto const num = static_cast<long double>(a.num * b.den - b.num * a.den);
    return num / static_cast<long double>(a.den * b.den);
}

std::int64_t scalar(Characteristic c, Measurement const& m)
{
    switch (c) {
    case Characteristic::kRelevance:
        return m.relevance;
    case Characteristic::kLength:
        return m.length;
    case Characteristic::kSumTf:
        return m.sum_tf;
    default:
        return 0;
    }
}

std::int64_t integer_tolerance(Characteristic c, Tolerances const& t)
{
    switch (c) {
    case Characteristic::kRelevance:
        return t.relevance;
    case Characteristic::kLength:
        return t.length;
    case Characteristic::kSumTf:
        return t.sum_tf;
    case Characteristic::kTf:
        return t.tf;
    default:
        return 0;
    }
}

std::string tf_key(TfVector const& tf)
{
    std::string key;
    for (auto const& [term, count] : tf) {
        key += term;
        key += '\0';
        key += std::to_string(count);
        key += '\0';
    }
    return key;
}

struct Judged {
    Doc const* doc;
    Measurement m;
};

/// Candidate index pairs (i < j) that may match on the control. Exact
/// controls are bucketed, tolerant scalar controls use a sorted window; the
/// caller still checks controls_match, so this only prunes.
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(std::vector<Judged> const& docs, MmtSpec const& spec)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto const n = docs.size();
    auto const c = spec.control;
    auto const& tol = spec.tolerances;
    auto emit_all = [&](std::vector<std::size_t> const& group) {
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                out.emplace_back(std::min(group[a], group[b]), std::max(group[a], group[b]));
            }
        }
    };
    if (c == Characteristic::kTf) {
        if (tol.tf != 0) {
            std::vector<std::size_t> all(n);
            std::iota(all.begin(), all.end(), 0);
            emit_all(all);
            return out;
        }
        std::unordered_map<std::string, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < n; ++i) {
            buckets[tf_key(docs[i].m.tf)].push_back(i);
        }
        for (auto const& [_, group] : buckets) {
            emit_all(group);
        }
        return out;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (c == Characteristic::kOverlap) {
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return docs[a].m.overlap() < docs[b].m.overlap(); });
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (overlap_gap(docs[order[b]].m.overlap(), docs[order[a]].m.overlap()) >
                    static_cast<long double>(tol.overlap)) {
                    break;
                }
                out.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
            }
        }
        return out;
    }
    auto const width = integer_tolerance(c, tol);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scalar(c, docs[a].m) < scalar(c, docs[b].m); });
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (scalar(c, docs[order[b]].m) - scalar(c, docs[order[a]].m) > width) {
                break;
            }
            out.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
        }
    }
    return out;
}

}  // namespace

void set_tolerance(Tolerances& tolerances, std::string_view assignment)
{
    auto const eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("tolerance must look like name=value, got '" + std::string(assignment) + "'");
    }
    auto const which = parse_characteristic(trim(assignment.substr(0, eq)));
    std::string const value(trim(assignment.substr(eq + 1)));
    char* end = nullptr;
    if (which == Characteristic::kOverlap) {
        auto const v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0' || !(v >= 0.0)) {
            throw ConfigError("overlap tolerance must be a non-negative number, got '" + value + "'");
        }
        tolerances.overlap = v;
        return;
    }
    auto const v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || *end != '\0' || v < 0) {
        throw ConfigError("tolerance for " + std::string(to_string(which)) +
                          " must be a non-negative integer, got '" + value + "'");
    }
    switch (which) {
    case Characteristic::kRelevance:
        tolerances.relevance = v;
        break;
    case Characteristic::kLength:
        tolerances.length = v;
        break;
    case Characteristic::kTf:
        tolerances.tf = v;
        break;
    case Characteristic::kSumTf:
        tolerances.sum_tf = v;
        break;
    case Characteristic::kOverlap:
        break;
    }
}

void MmtSpec::validate() const
{
    if (variable == control) {
        throw ConfigError("variable and control must differ (both are " + std::string(to_string(variable)) + ")");
    }
    auto const tf_pair = [](Characteristic a, Characteristic b) {
        return a == Characteristic::kTf && b == Characteristic::kSumTf;
    };
    if (tf_pair(variable, control) || tf_pair(control, variable)) {
        throw ConfigError("tf and sumtf cannot be paired as variable and control: no pairs can result");
    }
    if (!(tolerances.overlap >= 0.0)) {
        throw ConfigError("overlap tolerance must be non-negative");
    }
}

std::string MmtSpec::test_id() const
{
    return "mmt:" + std::string(to_string(variable)) + "|" + std::string(to_string(control));
}

bool controls_match(Characteristic control, Measurement const& a, Measurement const& b, Tolerances const& tolerances)
{
    switch (control) {
    case Characteristic::kRelevance:
    case Characteristic::kLength:
    case Characteristic::kSumTf:
        return std::llabs(scalar(control, a) - scalar(control, b)) <= integer_tolerance(control, tolerances);
    case Characteristic::kTf: {
        if (a.tf.size() != b.tf.size()) {
            return false;
        }
        for (auto ia = a.tf.begin(), ib = b.tf.begin(); ia != a.tf.end(); ++ia, ++ib) {
            if (ia->first != ib->first || std::llabs(ia->second - ib->second) > tolerances.tf) {
                return false;
            }
        }
        return true;
    }
    case Characteristic::kOverlap: {
        auto const gap = overlap_gap(a.overlap(), b.overlap());
        return (gap < 0 ? -gap : gap) <= static_cast<long double>(tolerances.overlap);
    }
    }
    return false;
}

int variable_order(Characteristic variable, Measurement const& a, Measurement const& b, Tolerances const& tolerances)
{
    switch (variable) {
    case Characteristic::kRelevance:
    case Characteristic::kLength:
    case Characteristic::kSumTf: {
        auto const x = scalar(variable, a);
        auto const y = scalar(variable, b);
        return x > y ? 1 : (x < y ? -1 : 0);
    }
    case Characteristic::kTf:
        if (tf_dominates(a.tf, b.tf)) {
            return 1;
        }
        return tf_dominates(b.tf, a.tf) ? -1 : 0;
    case Characteristic::kOverlap: {
        auto const gap = overlap_gap(a.overlap(), b.overlap());
        auto const eps = static_cast<long double>(tolerances.overlap);
        return gap > eps ? 1 : (gap < -eps ? -1 : 0);
    }
    }
    return 0;
}

TestSet build_mmt(MmtSpec const& spec, Qrels const& qrels, Collection const& collection, QuerySet const& queries,
                  PipelineConfig const& config, std::size_t jobs)
{
    spec.validate();
    auto const query_ids = qrels.query_ids();

    std::vector<std::string> missing_queries;
    std::vector<std::string> missing_docs;
    for (auto const& qid : query_ids) {
        if (queries.find(qid) == nullptr) {
            missing_queries.push_back(qid);
        }
        for (auto const& j : qrels.for_query(qid)) {
            if (collection.find(j.doc_id) == nullptr) {
                missing_docs.push_back(j.doc_id);
            }
        }
    }
    auto listing = [](std::vector<std::string> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::string out;
        for (std::size_t i = 0; i < ids.size() && i < 20; ++i) {
            out += (i ? ", " : "") + ids[i];
        }
        if (ids.size() > 20) {
            out += ", ... (" + std::to_string(ids.size()) + " in total)";
        }
        return out;
    };
    if (!missing_queries.empty()) {
        throw ValidationError("qrels reference unknown query ids: " + listing(missing_queries));
    }
    if (!missing_docs.empty()) {
        throw ValidationError("qrels reference unknown doc ids: " + listing(missing_docs));
    }

    bool const drop_degenerate = involves(spec, Characteristic::kLength) || involves(spec, Characteristic::kOverlap);
    std::vector<std::vector<PairSample>> per_query(query_ids.size());
    std::vector<std::size_t> degenerate(query_ids.size(), 0);
    parallel_for(query_ids.size(), jobs, [&](std::size_t qi) {
        auto const& query = *queries.find(query_ids[qi]);
        std::vector<Judged> docs;
        for (auto const& j : qrels.for_query(query.id)) {
            auto const* doc = collection.find(j.doc_id);
            auto m = measure(query.text, doc->text, j.grade, config);
            if (drop_degenerate && m.degenerate()) {
                ++degenerate[qi];
                continue;
            }
            docs.push_back({doc, std::move(m)});
        }
        auto& out = per_query[qi];
        for (auto const& [i, k] : candidate_pairs(docs, spec)) {
            auto const& a = docs[i];
            auto const& b = docs[k];
            if (!controls_match(spec.control, a.m, b.m, spec.tolerances)) {
                continue;
            }
            auto const order = variable_order(spec.variable, a.m, b.m, spec.tolerances);
            if (order == 0) {
                continue;
            }
            auto const& hi = order > 0 ? a : b;
            auto const& lo = order > 0 ? b : a;
            PairSample s{query, *hi.doc, *lo.doc, {}};
            s.meta["d1_grade"] = std::to_string(hi.m.relevance);
            s.meta["d2_grade"] = std::to_string(lo.m.relevance);
            out.push_back(std::move(s));
        }
    });

    TestSet test;
    test.id = spec.test_id();
    test.strategy = Strategy::kMmt;
    for (auto& part : per_query) {
        std::move(part.begin(), part.end(), std::back_inserter(test.samples));
    }
    canonical_sort(test.samples);
    auto const& t = spec.tolerances;
    test.provenance = {
        {"builder", "mmt"},
        {"variable", to_string(spec.variable)},
        {"control", to_string(spec.control)},
        {"tolerances",
         {{"relevance", t.relevance}, {"length", t.length}, {"tf", t.tf}, {"sumtf", t.sum_tf}, {"overlap", t.overlap}}},
        {"stopwords_sha256", config.stopwords_digest()},
        {"queries", query_ids.size()},
        {"judgments", qrels.size()},
        {"degenerate_docs_excluded", std::accumulate(degenerate.begin(), degenerate.end(), std::size_t{0})},
    };
    return test;
}

}  // namespace abnirml
