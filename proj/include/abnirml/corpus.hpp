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

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "abnirml/textproc.hpp"

namespace abnirml {

struct Query {
    std::string id;
    std::string text;
    friend bool operator==(Query const&, Query const&) = default;
};

struct Doc {
    std::string id;
    std::string text;
    friend bool operator==(Doc const&, Doc const&) = default;
};

struct Judgment {
    std::string query_id;
    std::string doc_id;
    int grade = 0;
    friend bool operator==(Judgment const&, Judgment const&) = default;
};

struct RunEntry {
    std::string query_id;
    std::string doc_id;
    int rank = 0;
    double score = 0.0;
    friend bool operator==(RunEntry const&, RunEntry const&) = default;
};

/// Items with unique string ids, kept in insertion order with O(1) lookup.
template <typename T>
class IdIndexed {
  public:
    using const_iterator = typename std::vector<T>::const_iterator;

    /// Returns false (and leaves the set unchanged) if the id already exists.
    bool insert(T item)
    {
        auto [it, inserted] = m_index.emplace(item.id, m_items.size());
        if (!inserted) {
            return false;
        }
        m_items.push_back(std::move(item));
        return true;
    }

    [[nodiscard]] T const* find(std::string_view id) const
    {
        auto it = m_index.find(std::string(id));
        return it == m_index.end() ? nullptr : &m_items[it->second];
    }

    [[nodiscard]] std::size_t size() const noexcept { return m_items.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_items.empty(); }
    [[nodiscard]] const_iterator begin() const noexcept { return m_items.begin(); }
    [[nodiscard]] const_iterator end() const noexcept { return m_items.end(); }
    [[nodiscard]] std::vector<T> const& items() const noexcept { return m_items; }

    friend bool operator==(IdIndexed const& a, IdIndexed const& b) { return a.m_items == b.m_items; }

  private:
    std::vector<T> m_items;
    std::unordered_map<std::string, std::size_t> m_index;
};

using QuerySet = IdIndexed<Query>;
using Collection = IdIndexed<Doc>;

/// Judgments keyed by query, each query's judgments in file order.
class Qrels {
  public:
    /// Returns false if (query_id, doc_id) was already judged.
    bool insert(Judgment judgment);

    [[nodiscard]] std::vector<Judgment> const& for_query(std::string_view query_id) const;
    /// Query ids in ascending lexicographic order.
    [[nodiscard]] std::vector<std::string> query_ids() const;
    [[nodiscard]] std::size_t size() const noexcept { return m_size; }
    [[nodiscard]] bool empty() const noexcept { return m_size == 0; }
    [[nodiscard]] std::vector<Judgment> all() const;
    [[nodiscard]] std::unordered_set<std::string> doc_ids() const;

    friend bool operator==(Qrels const& a, Qrels const& b) { return a.m_by_query == b.m_by_query; }

  private:
    std::map<std::string, std::vector<Judgment>, std::less<>> m_by_query;
    std::unordered_set<std::string> m_seen;
    std::size_t m_size = 0;
};

/// Run entries grouped by query and sorted by rank.
class Run {
  public:
    [[nodiscard]] std::vector<RunEntry> const& for_query(std::string_view query_id) const;
    [[nodiscard]] std::vector<std::string> query_ids() const;
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return m_by_query.empty(); }

    friend bool operator==(Run const&, Run const&) = default;

  private:
    friend Run load_run(std::filesystem::path const& path);
    friend Run make_run(std::vector<RunEntry> entries);
    std::map<std::string, std::vector<RunEntry>, std::less<>> m_by_query;
};

struct CollectionStats {
    std::size_t num_docs = 0;
    double avg_doc_len = 0.0;
    std::size_t total_len = 0;
    std::unordered_map<std::string, std::size_t> doc_freq;

    [[nodiscard]] std::size_t df(std::string_view term) const
    {
        auto it = doc_freq.find(std::string(term));
        return it == doc_freq.end() ? 0 : it->second;
    }
    /// SHA-256 over a canonical serialization; identifies the statistics in
    /// scorer ids and manifests.
    [[nodiscard]] std::string digest() const;

    friend bool operator==(CollectionStats const&, CollectionStats const&) = default;
};

[[nodiscard]] QuerySet load_queries(std::filesystem::path const& path);
[[nodiscard]] Collection load_collection(std::filesystem::path const& path);
/// Loads only documents whose id is in `keep`.
[[nodiscard]] Collection load_collection(std::filesystem::path const& path,
                                         std::unordered_set<std::string> const& keep);
[[nodiscard]] Qrels load_qrels(std::filesystem::path const& path);
[[nodiscard]] Run load_run(std::filesystem::path const& path);
/// Validates rank uniqueness and (qid, docid) uniqueness like load_run.
[[nodiscard]] Run make_run(std::vector<RunEntry> entries);

[[nodiscard]] CollectionStats compute_stats(Collection const& collection, PipelineConfig const& config);
/// Same statistics computed while streaming a collection file.
[[nodiscard]] CollectionStats compute_stats_from_file(std::filesystem::path const& path,
                                                      PipelineConfig const& config);

[[nodiscard]] std::string serialize_queries(QuerySet const& queries);
[[nodiscard]] std::string serialize_collection(Collection const& collection);
[[nodiscard]] std::string serialize_qrels(Qrels const& qrels);
[[nodiscard]] std::string serialize_run(Run const& run, std::string_view tag = "abnirml");

}  // namespace abnirml
