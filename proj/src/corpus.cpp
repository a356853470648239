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

#include "abnirml/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

struct TsvRecord {
    std::string id;
    std::string text;
};

/// `id<TAB>text`, split at the first tab only. Blank lines are skipped.
template <typename Fn>
void read_tsv(std::filesystem::path const& path, Fn&& fn)
{
    auto const source = path.string();
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        if (trim(line).empty()) {
            return;
        }
        auto const tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError("expected id<TAB>text", source, number);
        }
        auto const id = trim(line.substr(0, tab));
        if (id.empty()) {
            throw ParseError("empty id", source, number);
        }
        std::string text;
        try {
            text = nfc(trim(line.substr(tab + 1)));
        } catch (ParseError const& e) {
            throw ParseError(e.what(), source, number);
        }
        fn(TsvRecord{std::string(id), std::move(text)}, number);
    });
}

template <typename Int>
bool parse_int(std::string_view field, Int& out)
{
    auto const* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view field, double& out)
{
    auto const* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

void add_document(CollectionStats& stats, std::string_view text, PipelineConfig const& config)
{
    auto terms = analyze(text, config);
    stats.total_len += terms.size();
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& term : terms) {
        ++stats.doc_freq[std::move(term)];
    }
    ++stats.num_docs;
}

void finish_stats(CollectionStats& stats)
{
    if (stats.num_docs == 0) {
        throw ValidationError("cannot compute statistics of an empty collection");
    }
    stats.avg_doc_len = static_cast<double>(stats.total_len) / static_cast<double>(stats.num_docs);
}

}  // namespace

bool Qrels::insert(Judgment judgment)
{
    std::string key = judgment.query_id;
    key.push_back('\0');
    key += judgment.doc_id;
    if (!m_seen.insert(std::move(key)).second) {
        return false;
    }
    m_by_query[judgment.query_id].push_back(std::move(judgment));
    ++m_size;
    return true;
}

std::vector<Judgment> const& Qrels::for_query(std::string_view query_id) const
{
    static std::vector<Judgment> const kEmpty;
    auto it = m_by_query.find(query_id);
    return it == m_by_query.end() ? kEmpty : it->second;
}

std::vector<std::string> Qrels::query_ids() const
{
    std::vector<std::string> ids;
    ids.reserve(m_by_query.size());
    for (auto const& [id, _] : m_by_query) {
        ids.push_back(id);
    }
    return ids;
}

std::vector<Judgment> Qrels::all() const
{
    std::vector<Judgment> out;
    out.reserve(m_size);
    for (auto const& [_, judgments] : m_by_query) {
        out.insert(out.end(), judgments.begin(), judgments.end());
    }
    return out;
}

std::unordered_set<std::string> Qrels::doc_ids() const
{
    std::unordered_set<std::string> ids;
    for (auto const& [_, judgments] : m_by_query) {
        for (auto const& j : judgments) {
            ids.insert(j.doc_id);
        }
    }
    return ids;
}

std::vector<RunEntry> const& Run::for_query(std::string_view query_id) const
{
    static std::vector<RunEntry> const kEmpty;
    auto it = m_by_query.find(query_id);
    return it == m_by_query.end() ? kEmpty : it->second;
}

std::vector<std::string> Run::query_ids() const
{
    std::vector<std::string> ids;
    for (auto const& [id, _] : m_by_query) {
        ids.push_back(id);
    }
    return ids;
}

std::size_t Run::size() const noexcept
{
    std::size_t n = 0;
    for (auto const& [_, entries] : m_by_query) {
        n += entries.size();
    }
    return n;
}

std::string CollectionStats::digest() const
{
    std::vector<std::pair<std::string_view, std::size_t>> terms(doc_freq.begin(), doc_freq.end());
    std::sort(terms.begin(), terms.end());
    std::ostringstream out;
    out << num_docs << '\t' << total_len << '\n';
    for (auto const& [term, df] : terms) {
        out << term << '\t' << df << '\n';
    }
    return sha256_hex(out.str());
}

QuerySet load_queries(std::filesystem::path const& path)
{
    QuerySet queries;
    read_tsv(path, [&](TsvRecord record, std::size_t line) {
        if (record.text.empty()) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": empty query text for " + record.id);
        }
        auto id = record.id;
        if (!queries.insert(Query{std::move(record.id), std::move(record.text)})) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": duplicate query id " + id);
        }
    });
    return queries;
}

Collection load_collection(std::filesystem::path const& path)
{
    Collection docs;
    read_tsv(path, [&](TsvRecord record, std::size_t line) {
        auto id = record.id;
        if (!docs.insert(Doc{std::move(record.id), std::move(record.text)})) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": duplicate doc id " + id);
        }
    });
    return docs;
}

Collection load_collection(std::filesystem::path const& path, std::unordered_set<std::string> const& keep)
{
    Collection docs;
    read_tsv(path, [&](TsvRecord record, std::size_t line) {
        if (!keep.contains(record.id)) {
            return;
        }
        auto id = record.id;
        if (!docs.insert(Doc{std::move(record.id), std::move(record.text)})) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": duplicate doc id " + id);
        }
    });
    return docs;
}

Qrels load_qrels(std::filesystem::path const& path)
{
    Qrels qrels;
    auto const source = path.string();
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        auto const fields = split_ws(line);
        if (fields.empty()) {
            return;
        }
        if (fields.size() != 4) {
            throw ParseError("expected 4 fields (qid col2 docid grade), got " + std::to_string(fields.size()), source,
                             number);
        }
        int grade = 0;
        if (!parse_int(fields[3], grade)) {
            throw ParseError("non-integer grade '" + std::string(fields[3]) + "'", source, number);
        }
        if (grade < 0) {
            throw ValidationError(source + ":" + std::to_string(number) + ": negative grade");
        }
        Judgment judgment{std::string(fields[0]), std::string(fields[2]), grade};
        if (!qrels.insert(judgment)) {
            throw ValidationError(source + ":" + std::to_string(number) + ": duplicate judgment for (" +
                                  judgment.query_id + ", " + judgment.doc_id + ")");
        }
    });
    return qrels;
}

Run make_run(std::vector<RunEntry> entries)
{
    Run run;
    std::set<std::pair<std::string, std::string>> docs;
    std::set<std::pair<std::string, int>> ranks;
    for (auto& entry : entries) {
        if (entry.rank <= 0) {
            throw ValidationError("non-positive rank for " + entry.query_id + "/" + entry.doc_id);
        }
        if (!docs.emplace(entry.query_id, entry.doc_id).second) {
            throw ValidationError("duplicate run entry (" + entry.query_id + ", " + entry.doc_id + ")");
        }
        if (!ranks.emplace(entry.query_id, entry.rank).second) {
            throw ValidationError("duplicate rank " + std::to_string(entry.rank) + " for query " + entry.query_id);
        }
        auto qid = entry.query_id;
        run.m_by_query[qid].push_back(std::move(entry));
    }
    for (auto& [_, list] : run.m_by_query) {
        std::sort(list.begin(), list.end(), [](RunEntry const& a, RunEntry const& b) { return a.rank < b.rank; });
    }
    return run;
}

Run load_run(std::filesystem::path const& path)
{
    std::vector<RunEntry> entries;
    auto const source = path.string();
    for_each_line(path, [&](std::string_view line, std::size_t number) {
        auto const fields = split_ws(line);
        if (fields.empty()) {
            return;
        }
        if (fields.size() != 6) {
            throw ParseError("expected 6 fields (qid Q0 docid rank score tag), got " + std::to_string(fields.size()),
                             source, number);
        }
        RunEntry entry{std::string(fields[0]), std::string(fields[2]), 0, 0.0};
        if (!parse_int(fields[3], entry.rank)) {
            throw ParseError("non-integer rank '" + std::string(fields[3]) + "'", source, number);
        }
        if (!parse_double(fields[4], entry.score)) {
            throw ParseError("non-numeric score '" + std::string(fields[4]) + "'", source, number);
        }
        entries.push_back(std::move(entry));
    });
    try {
        return make_run(std::move(entries));
    } catch (ValidationError const& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

CollectionStats compute_stats(Collection const& collection, PipelineConfig const& config)
{
    CollectionStats stats;
    for (auto const& doc : collection) {
        add_document(stats, doc.text, config);
    }
    finish_stats(stats);
    return stats;
}

CollectionStats compute_stats_from_file(std::filesystem::path const& path, PipelineConfig const& config)
{
    CollectionStats stats;
    std::unordered_set<std::string> seen;
    read_tsv(path, [&](TsvRecord record, std::size_t line) {
        if (!seen.insert(record.id).second) {
            throw ValidationError(path.string() + ":" + std::to_string(line) + ": duplicate doc id " + record.id);
        }
        add_document(stats, record.text, config);
    });
    finish_stats(stats);
    return stats;
}

std::string serialize_queries(QuerySet const& queries)
{
    std::string out;
    for (auto const& q : queries) {
        out += q.id + '\t' + q.text + '\n';
    }
    return out;
}

std::string serialize_collection(Collection const& collection)
{
    std::string out;
    for (auto const& d : collection) {
        out += d.id + '\t' + d.text + '\n';
    }
    return out;
}

std::string serialize_qrels(Qrels const& qrels)
{
    std::string out;
    for (auto const& j : qrels.all()) {
        out += j.query_id + " 0 " + j.doc_id + ' ' + std::to_string(j.grade) + '\n';
    }
    return out;
}

std::string serialize_run(Run const& run, std::string_view tag)
{
    std::string out;
    for (auto const& qid : run.query_ids()) {
        for (auto const& e : run.for_query(qid)) {
            out += e.query_id + " Q0 " + e.doc_id + ' ' + std::to_string(e.rank) + ' ' + format_double(e.score) + ' ' +
                   std::string(tag) + '\n';
        }
    }
    return out;
}

}  // namespace abnirml
