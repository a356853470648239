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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abnirml/corpus.hpp"
#include "abnirml/textproc.hpp"

namespace abnirml {

struct ScoreRequest {
    std::string_view query;
    std::string_view doc;
};

/// A ranking function R(q, d). Scores must be a deterministic function of the
/// two texts for a fixed configuration; id() names that configuration and is
/// used as the cache namespace.
class Scorer {
  public:
    virtual ~Scorer() = default;
    [[nodiscard]] virtual std::string const& id() const = 0;
    [[nodiscard]] virtual std::vector<double> score_batch(std::span<ScoreRequest const> requests) = 0;
    /// Whether score_batch may be called from several threads at once.
    [[nodiscard]] virtual bool concurrent() const noexcept { return false; }

    [[nodiscard]] double score(std::string_view query, std::string_view doc)
    {
        ScoreRequest const request{query, doc};
        return score_batch(std::span(&request, 1)).front();
    }
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
    /// Clamp negative idf (df > N/2) to zero.
    bool clamp_idf = false;
};

[[nodiscard]] double bm25_idf(std::size_t num_docs, std::size_t df);

/// Okapi BM25 over the processed terms of the configured pipeline. Terms that
/// do not occur in the collection statistics contribute nothing.
[[nodiscard]] double bm25_score(std::string_view query, std::string_view doc, CollectionStats const& stats,
                                PipelineConfig const& pipeline, Bm25Params const& params = {});

class Bm25Scorer final : public Scorer {
  public:
    Bm25Scorer(CollectionStats stats, PipelineConfig pipeline, Bm25Params params = {});

    [[nodiscard]] std::string const& id() const override { return m_id; }
    [[nodiscard]] std::vector<double> score_batch(std::span<ScoreRequest const> requests) override;
    [[nodiscard]] bool concurrent() const noexcept override { return true; }

    [[nodiscard]] CollectionStats const& stats() const noexcept { return m_stats; }
    [[nodiscard]] Bm25Params const& params() const noexcept { return m_params; }

  private:
    CollectionStats m_stats;
    PipelineConfig m_pipeline;
    Bm25Params m_params;
    std::string m_id;
};

/// Persistent score cache keyed on (scorer id, hash of query text, hash of doc
/// text). One append-only file per scorer id; every line carries a checksum.
class ScoreCache {
  public:
    ScoreCache(std::filesystem::path directory, std::string scorer_id);

    [[nodiscard]] std::optional<double> lookup(std::string const& key) const;
    void store(std::vector<std::pair<std::string, double>> const& entries);
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::filesystem::path const& file() const noexcept { return m_file; }

    [[nodiscard]] static std::string key(std::string_view query, std::string_view doc);

  private:
    void load();

    std::filesystem::path m_file;
    std::string m_scorer_id;
    mutable std::mutex m_mutex;
    std::unordered_map<std::string, double> m_scores;
};

/// Wraps a scorer so that a (query text, doc text) pair is scored by the inner
/// scorer at most once, across batches and across processes when a cache
/// directory is given.
class CachedScorer final : public Scorer {
  public:
    /// In-memory only.
    explicit CachedScorer(std::unique_ptr<Scorer> inner);
    CachedScorer(std::unique_ptr<Scorer> inner, std::filesystem::path const& directory);
    ~CachedScorer() override;

    [[nodiscard]] std::string const& id() const override { return m_inner->id(); }
    [[nodiscard]] std::vector<double> score_batch(std::span<ScoreRequest const> requests) override;
    [[nodiscard]] bool concurrent() const noexcept override { return m_inner->concurrent(); }

    /// Number of (query, doc) pairs forwarded to the inner scorer so far.
    [[nodiscard]] std::size_t inner_requests() const noexcept { return m_inner_requests; }

  private:
    struct State;

    std::unique_ptr<Scorer> m_inner;
    std::unique_ptr<ScoreCache> m_cache;
    std::unique_ptr<State> m_state;
    std::mutex m_inner_mutex;
    std::atomic<std::size_t> m_inner_requests{0};
};

struct DeltaConfig {
    std::string scorer_id;
    double delta = 0.0;
    std::string run_digest;  ///< SHA-256 of the calibration run, empty when given explicitly
    std::size_t top_k_rescore = 100;
    std::size_t top_k_diff = 10;
    std::size_t queries_used = 0;
    std::size_t queries_skipped = 0;
    std::size_t differences = 0;
};

struct CalibrationOptions {
    std::size_t top_k_rescore = 100;
    std::size_t top_k_diff = 10;
};

/// Median adjacent score difference among each query's top results under the
/// target scorer. For every query the `top_k_rescore` run documents are
/// rescored, re-sorted by the new score (ties: doc id descending), and the
/// `top_k_diff - 1` adjacent differences of the head are pooled across queries.
[[nodiscard]] DeltaConfig calibrate_delta(Scorer& scorer, Run const& run, Collection const& collection,
                                          QuerySet const& queries, CalibrationOptions const& options = {});

/// Median of a non-empty sample; even sizes average the two middle values.
[[nodiscard]] double median(std::vector<double> values);

}  // namespace abnirml
