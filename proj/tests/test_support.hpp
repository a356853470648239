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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <algorithm>
#include <unistd.h>
#include <string>
#include <vector>

#include "abnirml/corpus.hpp"
#include "abnirml/util.hpp"

namespace abnirml::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir()
    {
        static std::uint64_t counter = 0;
        auto const stamp = std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                           std::to_string(std::random_device{}());
        m_path = std::filesystem::temp_directory_path() / ("abnirml-test-" + stamp);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(TempDir const&) = delete;
    TempDir& operator=(TempDir const&) = delete;

    [[nodiscard]] std::filesystem::path const& path() const noexcept { return m_path; }
    [[nodiscard]] std::filesystem::path operator/(std::string const& name) const { return m_path / name; }

  private:
    std::filesystem::path m_path;
};

inline std::filesystem::path write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

inline std::filesystem::path test_data(std::string const& name)
{
    return std::filesystem::path(ABNIRML_TEST_DATA_DIR) / name;
}

/// Porter-stable, non-stopword content words.
inline std::vector<std::string> const& content_words()
{
    static std::vector<std::string> const words = {
        "cat",  "dog",  "bird", "fish", "tree", "car",  "book", "lamp", "desk", "moon",
        "star", "road", "bank", "salt", "wind", "rock", "milk", "coin", "ship", "farm",
        "gold", "iron", "wolf", "bear", "corn", "rice", "soup", "bell", "drum", "harp",
    };
    return words;
}

struct SyntheticCorpus {
    QuerySet queries;
    Collection collection;
    Qrels qrels;
    std::vector<RunEntry> run;
};

struct SyntheticOptions {
    std::size_t num_docs = 1000;
    std::size_t num_queries = 20;
    std::size_t judged_per_query = 30;
    std::size_t run_depth = 100;
    /// Query terms are drawn from the first `rare_words` content words, each
    /// of which is kept in fewer than half of the documents.
    std::size_t rare_words = 10;
};

/// Random documents of several sentences built from content words, common
/// stopwords and punctuation; deterministic for a given seed.
inline SyntheticCorpus make_corpus(std::uint64_t seed, SyntheticOptions const& o = {})
{
    std::mt19937_64 gen(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(gen() % n); };
    static std::vector<std::string> const fillers = {"the", "of", "and", "a", "in", "to", "is", "with", "on", "for"};
    static std::vector<std::string> const marks = {",", ";", " -", ":"};
    auto const& words = content_words();
    SyntheticCorpus c;
    for (std::size_t d = 0; d < o.num_docs; ++d) {
        std::string text;
        auto const sentences = 1 + pick(4);
        for (std::size_t s = 0; s < sentences; ++s) {
            auto const len = 3 + pick(9);
            std::string sentence;
            for (std::size_t w = 0; w < len; ++w) {
                std::string word;
                if (pick(3) == 0) {
                    word = fillers[pick(fillers.size())];
                } else {
                    // Rare words show up in roughly one document in five.
                    auto const idx = pick(words.size());
                    word = idx < o.rare_words && pick(8) != 0 ? words[o.rare_words + pick(words.size() - o.rare_words)]
                                                              : words[idx];
                }
                if (w == 0) {
                    word[0] = static_cast<char>(word[0] - 'a' + 'A');
                }
                sentence += (w ? " " : "") + word;
                if (w + 1 < len && pick(6) == 0) {
                    sentence += marks[pick(marks.size())];
                }
            }
            text += (s ? " " : "") + sentence + (pick(4) == 0 ? "!" : ".");
        }
        c.collection.insert(Doc{"D" + std::to_string(d), text});
    }
    for (std::size_t q = 0; q < o.num_queries; ++q) {
        auto const terms = 1 + pick(3);
        std::string text;
        for (std::size_t t = 0; t < terms; ++t) {
            text += (t ? " " : "") + words[pick(o.rare_words)];
        }
        auto const qid = "Q" + std::to_string(q);
        c.queries.insert(Query{qid, text});
        std::vector<std::size_t> docs;
        while (docs.size() < std::min(o.judged_per_query, o.num_docs)) {
            auto const d = pick(o.num_docs);
            if (std::find(docs.begin(), docs.end(), d) == docs.end()) {
                docs.push_back(d);
            }
        }
        for (auto d : docs) {
            c.qrels.insert(Judgment{qid, "D" + std::to_string(d), static_cast<int>(pick(4))});
        }
        for (std::size_t r = 0; r < std::min(o.run_depth, o.num_docs); ++r) {
            c.run.push_back(RunEntry{qid, "D" + std::to_string((q * 7 + r * 13) % o.num_docs), static_cast<int>(r + 1),
                                     static_cast<double>(o.run_depth - r)});
        }
    }
    return c;
}

}  // namespace abnirml::testing
