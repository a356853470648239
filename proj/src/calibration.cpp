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

#include <algorithm>

#include "abnirml/error.hpp"
#include "abnirml/scorer.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw ValidationError("median of an empty sample");
    }
    auto const n = values.size();
    auto const mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) {
        return *mid;
    }
    auto const lower = *std::max_element(values.begin(), mid);
    return (lower + *mid) / 2.0;
}

DeltaConfig calibrate_delta(Scorer& scorer, Run const& run, Collection const& collection, QuerySet const& queries,
                            CalibrationOptions const& options)
{
    if (options.top_k_diff < 2) {
        throw ConfigError("calibration needs at least two top documents per query");
    }
    DeltaConfig config;
    config.scorer_id = scorer.id();
    config.top_k_rescore = options.top_k_rescore;
    config.top_k_diff = options.top_k_diff;
    config.run_digest = sha256_hex(serialize_run(run));

    // Score every query's candidates in one batch; per-query slices follow.
    struct Slice {
        std::size_t begin;
        std::size_t end;
    };
    std::vector<ScoreRequest> requests;
    std::vector<std::string const*> doc_ids;
    std::vector<Slice> slices;
    for (auto const& qid : run.query_ids()) {
        auto const* query = queries.find(qid);
        if (query == nullptr) {
            throw ValidationError("run query " + qid + " is not in the query set");
        }
        auto const& entries = run.for_query(qid);
        auto const take = std::min(entries.size(), options.top_k_rescore);
        Slice slice{requests.size(), requests.size()};
        for (std::size_t i = 0; i < take; ++i) {
            auto const* doc = collection.find(entries[i].doc_id);
            if (doc == nullptr) {
                throw ValidationError("run document " + entries[i].doc_id + " (query " + qid +
                                      ") is not in the collection");
            }
            requests.push_back({query->text, doc->text});
            doc_ids.push_back(&doc->id);
        }
        slice.end = requests.size();
        slices.push_back(slice);
    }
    auto const scores = scorer.score_batch(requests);

    std::vector<double> pooled;
    for (auto const& slice : slices) {
        auto const n = slice.end - slice.begin;
        if (n < options.top_k_diff) {
            ++config.queries_skipped;
            continue;
        }
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = slice.begin + i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) {
                return scores[a] > scores[b];
            }
            return *doc_ids[a] > *doc_ids[b];
        });
        for (std::size_t i = 0; i + 1 < options.top_k_diff; ++i) {
            pooled.push_back(scores[order[i]] - scores[order[i + 1]]);
        }
        ++config.queries_used;
    }
    if (pooled.empty()) {
        throw ValidationError("calibration skipped every query: none has " + std::to_string(options.top_k_diff) +
                              " rescored documents");
    }
    config.differences = pooled.size();
    config.delta = median(std::move(pooled));
    return config;
}

}  // namespace abnirml
