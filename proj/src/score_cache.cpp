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

#include <sys/file.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <condition_variable>
#include <unordered_set>

#include "abnirml/error.hpp"
#include "abnirml/scorer.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

constexpr std::string_view kCacheMagic = "abnirml-score-cache/1";

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string hexfloat(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::string entry_line(std::string const& key, double score)
{
    auto body = key + '\t' + hexfloat(score);
    return body + '\t' + hex64(fnv1a64(body)) + '\n';
}

/// Appends `data` under an exclusive advisory lock so concurrent processes
/// never interleave partial lines.
void locked_append(std::filesystem::path const& file, std::string const& data)
{
    int fd = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) {
        throw IoError("cannot open score cache " + file.string() + ": " + std::strerror(errno));
    }
    ::flock(fd, LOCK_EX);
    std::size_t written = 0;
    bool ok = true;
    while (written < data.size()) {
        auto n = ::write(fd, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            ok = false;
            break;
        }
        written += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (!ok) {
        throw IoError("cannot append to score cache " + file.string());
    }
}

}  // namespace

ScoreCache::ScoreCache(std::filesystem::path directory, std::string scorer_id) : m_scorer_id(std::move(scorer_id))
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw IoError("cannot create cache directory " + directory.string() + ": " + ec.message());
    }
    m_file = directory / (sha256_hex(m_scorer_id).substr(0, 16) + ".scores");
    load();
}

std::string ScoreCache::key(std::string_view query, std::string_view doc)
{
    return sha256_hex(query).substr(0, 32) + sha256_hex(doc).substr(0, 32);
}

void ScoreCache::load()
{
    if (!std::filesystem::exists(m_file)) {
        locked_append(m_file, std::string(kCacheMagic) + '\t' + m_scorer_id + '\n');
    }
    auto const contents = read_file(m_file);
    auto corrupt = [&](std::size_t line) {
        return CacheCorruptError("score cache " + m_file.string() + " is corrupt at line " + std::to_string(line) +
                                 "; delete the file to clear the cache");
    };
    if (!contents.empty() && contents.back() != '\n') {
        throw corrupt(static_cast<std::size_t>(std::count(contents.begin(), contents.end(), '\n')) + 1);
    }
    std::size_t pos = 0;
    std::size_t number = 0;
    while (pos < contents.size()) {
        auto const nl = contents.find('\n', pos);
        std::string_view const line(contents.data() + pos, nl - pos);
        pos = nl + 1;
        ++number;
        if (number == 1) {
            if (line != std::string(kCacheMagic) + '\t' + m_scorer_id) {
                throw corrupt(number);
            }
            continue;
        }
        auto const t1 = line.find('\t');
        auto const t2 = line.rfind('\t');
        if (t1 == std::string_view::npos || t2 == t1) {
            throw corrupt(number);
        }
        auto const body = line.substr(0, t2);
        if (hex64(fnv1a64(body)) != line.substr(t2 + 1)) {
            throw corrupt(number);
        }
        std::string const repr(line.substr(t1 + 1, t2 - t1 - 1));
        char* end = nullptr;
        double const score = std::strtod(repr.c_str(), &end);
        if (end != repr.c_str() + repr.size()) {
            throw corrupt(number);
        }
        m_scores[std::string(line.substr(0, t1))] = score;
    }
}

std::optional<double> ScoreCache::lookup(std::string const& key) const
{
    std::lock_guard lock(m_mutex);
    auto it = m_scores.find(key);
    if (it == m_scores.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ScoreCache::store(std::vector<std::pair<std::string, double>> const& entries)
{
    if (entries.empty()) {
        return;
    }
    std::string data;
    for (auto const& [key, score] : entries) {
        data += entry_line(key, score);
    }
    std::lock_guard lock(m_mutex);
    locked_append(m_file, data);
    for (auto const& [key, score] : entries) {
        m_scores[key] = score;
    }
}

std::size_t ScoreCache::size() const
{
    std::lock_guard lock(m_mutex);
    return m_scores.size();
}

/// Scores seen by this process plus the keys currently being computed, so
/// that concurrent callers never send the same pair to the inner scorer twice.
struct CachedScorer::State {
    std::mutex mutex;
    std::condition_variable landed;
    std::unordered_map<std::string, double> memory;
    std::unordered_set<std::string> in_flight;
};

CachedScorer::CachedScorer(std::unique_ptr<Scorer> inner)
    : m_inner(std::move(inner)), m_state(std::make_unique<State>())
{}

CachedScorer::CachedScorer(std::unique_ptr<Scorer> inner, std::filesystem::path const& directory)
    : m_inner(std::move(inner)),
      m_cache(std::make_unique<ScoreCache>(directory, m_inner->id())),
      m_state(std::make_unique<State>())
{}

CachedScorer::~CachedScorer() = default;

std::vector<double> CachedScorer::score_batch(std::span<ScoreRequest const> requests)
{
    auto& state = *m_state;
    std::vector<std::string> keys;
    keys.reserve(requests.size());
    for (auto const& r : requests) {
        keys.push_back(ScoreCache::key(r.query, r.doc));
    }

    auto cached = [&](std::string const& key) -> std::optional<double> {
        if (auto it = state.memory.find(key); it != state.memory.end()) {
            return it->second;
        }
        if (m_cache) {
            if (auto hit = m_cache->lookup(key)) {
                state.memory.emplace(key, *hit);
                return hit;
            }
        }
        return std::nullopt;
    };

    // Claim every key nobody has scored or is scoring yet.
    std::vector<std::size_t> mine;
    {
        std::lock_guard lock(state.mutex);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (cached(keys[i]) || state.in_flight.contains(keys[i])) {
                continue;
            }
            state.in_flight.insert(keys[i]);
            mine.push_back(i);
        }
    }

    if (!mine.empty()) {
        std::vector<ScoreRequest> misses;
        misses.reserve(mine.size());
        for (auto i : mine) {
            misses.push_back(requests[i]);
        }
        std::vector<double> scores;
        try {
            if (m_inner->concurrent()) {
                scores = m_inner->score_batch(misses);
            } else {
                std::lock_guard inner_lock(m_inner_mutex);
                scores = m_inner->score_batch(misses);
            }
        } catch (...) {
            std::lock_guard lock(state.mutex);
            for (auto i : mine) {
                state.in_flight.erase(keys[i]);
            }
            state.landed.notify_all();
            throw;
        }
        m_inner_requests += misses.size();
        std::vector<std::pair<std::string, double>> entries;
        entries.reserve(mine.size());
        for (std::size_t k = 0; k < mine.size(); ++k) {
            entries.emplace_back(keys[mine[k]], scores[k]);
        }
        if (m_cache) {
            m_cache->store(entries);
        }
        std::lock_guard lock(state.mutex);
        for (auto& [key, score] : entries) {
            state.memory[key] = score;
            state.in_flight.erase(key);
        }
        state.landed.notify_all();
    }

    std::vector<double> out(requests.size());
    std::unique_lock lock(state.mutex);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::optional<double> score;
        state.landed.wait(lock, [&] {
            score = cached(keys[i]);
            return score.has_value() || !state.in_flight.contains(keys[i]);
        });
        if (!score) {
            throw ScorerError("concurrent scoring of a shared request failed");
        }
        out[i] = *score;
    }
    return out;
}

}  // namespace abnirml
