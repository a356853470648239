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
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace abnirml {

/// Typical ASCII punctuation removed by the stop/punctuation manipulation and
/// used as token boundaries everywhere.
inline constexpr std::string_view kDefaultPunctuation = R"(!"#$%&\'()*+,-./:;<=>?@[]^_`{|}~)";

/// Half-open byte range into a source string.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    [[nodiscard]] std::string_view of(std::string_view text) const { return text.substr(begin, end - begin); }
    friend bool operator==(Span, Span) = default;
};

struct Token {
    std::string surface;  ///< lowercased
    Span span;
    friend bool operator==(Token const&, Token const&) = default;
};

enum class StemmerKind { kPorter, kNone };
enum class LemmatizerKind { kRuleBased, kExternal, kNone };

struct PipelineConfig {
    std::unordered_set<std::string> stopwords;
    std::string punctuation = std::string(kDefaultPunctuation);
    StemmerKind stemmer = StemmerKind::kPorter;
    LemmatizerKind lemmatizer = LemmatizerKind::kRuleBased;

    /// Bundled stopword list, default punctuation, Porter stemming.
    [[nodiscard]] static PipelineConfig defaults();
    /// Like defaults() but with the stopword list read from `path`.
    [[nodiscard]] static PipelineConfig with_stopword_file(std::filesystem::path const& path);

    [[nodiscard]] bool is_stopword(std::string_view term) const
    {
        return stopwords.find(std::string(term)) != stopwords.end();
    }
    [[nodiscard]] bool is_punctuation(char c) const noexcept
    {
        return punctuation.find(c) != std::string::npos;
    }
    /// SHA-256 over the sorted stopword list; recorded in run manifests.
    [[nodiscard]] std::string stopwords_digest() const;
};

/// Reads a one-term-per-line list, lowercasing and skipping blank lines.
[[nodiscard]] std::unordered_set<std::string> load_word_list(std::filesystem::path const& path);

[[nodiscard]] std::vector<Token> tokenize(std::string_view text, PipelineConfig const& config);
[[nodiscard]] std::vector<Token> remove_stopwords(std::vector<Token> tokens, PipelineConfig const& config);

/// Porter (1980) suffix stripping. Words of one or two letters are returned
/// unchanged, as in the reference implementation.
[[nodiscard]] std::string porter_stem(std::string_view word);

/// tokenize, drop stopwords, then stem with the configured stemmer.
[[nodiscard]] std::vector<std::string> analyze(std::string_view text, PipelineConfig const& config);

enum class PosTag { kDet, kPron, kPrep, kConj, kAux, kVerb, kAdv, kAdj, kNum, kNoun };

[[nodiscard]] PosTag pos_tag(std::string_view lowercase_word);

/// Exception-lexicon lookup, then English inflectional suffix rules.
[[nodiscard]] std::string lemmatize(std::string_view token, std::optional<PosTag> pos_hint = std::nullopt);

[[nodiscard]] bool is_preposition(std::string_view lowercase_token);

[[nodiscard]] std::vector<Span> sentence_spans(std::string_view text);
[[nodiscard]] std::vector<std::string> split_sentences(std::string_view text);

/// Maximal (determiner? modifier* noun+) runs, separated only by whitespace.
[[nodiscard]] std::vector<Span> noun_chunk_spans(std::string_view text);
[[nodiscard]] std::vector<std::string> noun_chunks(std::string_view text);

/// Linguistic annotations used by the manipulation and dataset-transfer
/// builders. The rule-based default can be replaced by an implementation
/// backed by a full NLP toolkit.
class Annotator {
  public:
    virtual ~Annotator() = default;
    [[nodiscard]] virtual std::string lemma(std::string_view lowercase_token) const = 0;
    [[nodiscard]] virtual std::vector<Span> sentences(std::string_view text) const = 0;
    [[nodiscard]] virtual std::vector<Span> noun_chunks(std::string_view text) const = 0;
};

class RuleBasedAnnotator : public Annotator {
  public:
    [[nodiscard]] std::string lemma(std::string_view lowercase_token) const override;
    [[nodiscard]] std::vector<Span> sentences(std::string_view text) const override;
    [[nodiscard]] std::vector<Span> noun_chunks(std::string_view text) const override;
};

/// Rule-based annotator whose lemmas are overridden by a `form<TAB>lemma`
/// file, e.g. exported from an external lemmatizer.
class LemmaFileAnnotator : public RuleBasedAnnotator {
  public:
    explicit LemmaFileAnnotator(std::filesystem::path const& path);
    [[nodiscard]] std::string lemma(std::string_view lowercase_token) const override;

  private:
    std::unordered_map<std::string, std::string> m_lemmas;
};

/// SplitMix64. The sequence for a given seed is part of the reproducibility
/// contract: never change the constants or the range reduction.
class Rng {
  public:
    static constexpr std::string_view kName = "splitmix64";

    explicit constexpr Rng(std::uint64_t seed) noexcept : m_state(seed) {}

    constexpr std::uint64_t next() noexcept
    {
        m_state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = m_state;
        z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31U);
    }

    /// Uniform-ish integer in [0, n) by modulo reduction. n must be > 0.
    constexpr std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

    /// Double in [0, 1) from the top 53 bits.
    constexpr double unit() noexcept { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

    [[nodiscard]] constexpr std::uint64_t state() const noexcept { return m_state; }

  private:
    std::uint64_t m_state;
};

/// Fisher-Yates from the back: for i = n-1 .. 1, swap(i, below(i + 1)).
template <typename T>
void shuffle_in_place(std::span<T> items, Rng& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        auto const j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

template <typename T>
[[nodiscard]] std::vector<T> seeded_shuffle(std::vector<T> items, Rng& rng)
{
    shuffle_in_place(std::span<T>(items), rng);
    return items;
}

namespace lexicon {
std::string_view stopwords_terrier();
std::string_view prepositions();
std::string_view pos_tags();
std::string_view lemma_exceptions();
std::string_view lemma_protected();
}  // namespace lexicon

}  // namespace abnirml
