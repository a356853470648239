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

#include <cmath>
#include <map>
#include <set>

#include "abnirml/scorer.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

double bm25_idf(std::size_t num_docs, std::size_t df)
{
    auto const n = static_cast<double>(num_docs);
    auto const f = static_cast<double>(df);
    return std::log((n - f + 0.5) / (f + 0.5));
}

double bm25_score(std::string_view query, std::string_view doc, CollectionStats const& stats,
                  PipelineConfig const& pipeline, Bm25Params const& params)
{
    std::set<std::string> const terms = [&] {
        auto analyzed = analyze(query, pipeline);
        return std::set<std::string>(std::make_move_iterator(analyzed.begin()), std::make_move_iterator(analyzed.end()));
    }();
    if (terms.empty()) {
        return 0.0;
    }
    auto const doc_terms = analyze(doc, pipeline);
    std::map<std::string_view, std::size_t> tf;
    for (auto const& term : doc_terms) {
        if (terms.contains(term)) {
            ++tf[term];
        }
    }
    auto const dl = static_cast<double>(doc_terms.size());
    auto const norm = params.k1 * (1.0 - params.b + params.b * dl / stats.avg_doc_len);
    double score = 0.0;
    for (auto const& term : terms) {
        auto const df = stats.df(term);
        auto it = tf.find(term);
        if (df == 0 || it == tf.end()) {
            continue;
        }
        double idf = bm25_idf(stats.num_docs, df);
        if (params.clamp_idf && idf < 0.0) {
            idf = 0.0;
        }
        auto const f = static_cast<double>(it->second);
        score += idf * f * (params.k1 + 1.0) / (f + norm);
    }
    return score;
}

Bm25Scorer::Bm25Scorer(CollectionStats stats, PipelineConfig pipeline, Bm25Params params)
    : m_stats(std::move(stats)), m_pipeline(std::move(pipeline)), m_params(params)
{
    m_id = "bm25:k1=" + format_double(m_params.k1) + ":b=" + format_double(m_params.b) +
           (m_params.clamp_idf ? ":clamp" : "") + ":stem=" +
           (m_pipeline.stemmer == StemmerKind::kPorter ? "porter" : "none") +
           ":stats=" + m_stats.digest().substr(0, 16) + ":stop=" + m_pipeline.stopwords_digest().substr(0, 16);
}

std::vector<double> Bm25Scorer::score_batch(std::span<ScoreRequest const> requests)
{
    std::vector<double> scores;
    scores.reserve(requests.size());
    for (auto const& r : requests) {
        scores.push_back(bm25_score(r.query, r.doc, m_stats, m_pipeline, m_params));
    }
    return scores;
}

}  // namespace abnirml
