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

#include "abnirml/textproc.hpp"

#include <algorithm>
#include <array>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

std::unordered_set<std::string> parse_word_list(std::string_view contents)
{
    std::unordered_set<std::string> words;
    std::size_t pos = 0;
    while (pos <= contents.size()) {
        auto const nl = contents.find('\n', pos);
        auto line = trim(contents.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        if (!line.empty()) {
            std::string word(line);
            std::transform(word.begin(), word.end(), word.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            words.insert(std::move(word));
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return words;
}

std::unordered_map<std::string, std::string> parse_tsv_map(std::string_view contents)
{
    std::unordered_map<std::string, std::string> map;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        auto nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = contents.size();
        }
        auto const line = contents.substr(pos, nl - pos);
        auto const tab = line.find('\t');
        if (tab != std::string_view::npos) {
            map.emplace(std::string(trim(line.substr(0, tab))), std::string(trim(line.substr(tab + 1))));
        }
        pos = nl + 1;
    }
    return map;
}

bool is_space(UChar32 c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || u_isUWhiteSpace(c); }

void append_utf8(std::string& out, UChar32 c)
{
    std::array<std::uint8_t, U8_MAX_LENGTH> buf{};
    std::int32_t len = 0;
    U8_APPEND_UNSAFE(buf.data(), len, c);
    out.append(reinterpret_cast<char const*>(buf.data()), static_cast<std::size_t>(len));
}

}  // namespace

PipelineConfig PipelineConfig::defaults()
{
    PipelineConfig config;
    config.stopwords = parse_word_list(lexicon::stopwords_terrier());
    return config;
}

PipelineConfig PipelineConfig::with_stopword_file(std::filesystem::path const& path)
{
    PipelineConfig config;
    config.stopwords = load_word_list(path);
    return config;
}

std::string PipelineConfig::stopwords_digest() const
{
    std::vector<std::string_view> sorted(stopwords.begin(), stopwords.end());
    std::sort(sorted.begin(), sorted.end());
    std::string joined;
    for (auto word : sorted) {
        joined.append(word);
        joined.push_back('\n');
    }
    return sha256_hex(joined);
}

std::unordered_set<std::string> load_word_list(std::filesystem::path const& path)
{
    return parse_word_list(read_file(path));
}

std::vector<Token> tokenize(std::string_view text, PipelineConfig const& config)
{
    std::vector<Token> tokens;
    auto const* bytes = reinterpret_cast<std::uint8_t const*>(text.data());
    auto const length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    Token current;
    bool in_token = false;
    auto flush = [&](std::size_t end) {
        if (in_token) {
            current.span.end = end;
            tokens.push_back(std::move(current));
            current = Token{};
            in_token = false;
        }
    };
    while (i < length) {
        auto const start = static_cast<std::size_t>(i);
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        bool const boundary =
            c < 0 ? false : (is_space(c) || (c < 0x80 && config.is_punctuation(static_cast<char>(c))));
        if (boundary) {
            flush(start);
            continue;
        }
        if (!in_token) {
            in_token = true;
            current.span.begin = start;
        }
        if (c < 0) {
            current.surface.push_back(static_cast<char>(bytes[start]));
        } else {
            append_utf8(current.surface, u_tolower(c));
        }
    }
    flush(text.size());
    return tokens;
}

std::vector<Token> remove_stopwords(std::vector<Token> tokens, PipelineConfig const& config)
{
    std::erase_if(tokens, [&](Token const& t) { return config.is_stopword(t.surface); });
    return tokens;
}

std::vector<std::string> analyze(std::string_view text, PipelineConfig const& config)
{
    std::vector<std::string> terms;
    for (auto& token : tokenize(text, config)) {
        if (config.is_stopword(token.surface)) {
            continue;
        }
        if (config.stemmer == StemmerKind::kPorter) {
            terms.push_back(porter_stem(token.surface));
        } else {
            terms.push_back(std::move(token.surface));
        }
    }
    return terms;
}

bool is_preposition(std::string_view lowercase_token)
{
    static auto const kPrepositions = parse_word_list(lexicon::prepositions());
    return kPrepositions.find(std::string(lowercase_token)) != kPrepositions.end();
}

PosTag pos_tag(std::string_view word)
{
    static auto const kLexicon = [] {
        std::unordered_map<std::string, PosTag> map;
        static constexpr std::pair<std::string_view, PosTag> kNames[] = {
            {"DET", PosTag::kDet},   {"PRON", PosTag::kPron}, {"PREP", PosTag::kPrep}, {"CONJ", PosTag::kConj},
            {"AUX", PosTag::kAux},   {"VERB", PosTag::kVerb}, {"ADV", PosTag::kAdv},   {"ADJ", PosTag::kAdj},
            {"NUM", PosTag::kNum},   {"NOUN", PosTag::kNoun},
        };
        for (auto const& [form, tag] : parse_tsv_map(lexicon::pos_tags())) {
            for (auto const& [name, value] : kNames) {
                if (tag == name) {
                    map.emplace(form, value);
                }
            }
        }
        return map;
    }();
    if (auto it = kLexicon.find(std::string(word)); it != kLexicon.end()) {
        return it->second;
    }
    if (word.empty()) {
        return PosTag::kNoun;
    }
    if (std::all_of(word.begin(), word.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
        return PosTag::kNum;
    }
    auto ends = [&](std::string_view suffix) { return word.size() > suffix.size() + 2 && word.ends_with(suffix); };
    if (ends("ly")) {
        return PosTag::kAdv;
    }
    for (auto suffix : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical"}) {
        if (ends(suffix)) {
            return PosTag::kAdj;
        }
    }
    for (auto suffix : {"ing", "ed", "ize", "ise", "ify"}) {
        if (ends(suffix)) {
            return PosTag::kVerb;
        }
    }
    return PosTag::kNoun;
}

namespace {

bool is_abbreviation(std::string_view text, std::size_t dot)
{
    static std::unordered_set<std::string> const kAbbreviations = {
        "mr",  "mrs",  "ms",  "dr",   "prof", "sr",   "jr",   "st",  "vs",  "etc", "e.g", "i.e", "inc",
        "ltd", "co",   "corp", "no",  "fig",  "approx", "dept", "est", "jan", "feb", "mar", "apr", "jun",
        "jul", "aug",  "sep", "sept", "oct",  "nov",  "dec",  "mt",  "u.s", "u.k", "a.m", "p.m", "gen",
        "gov", "rep",  "sen", "rev",  "ph.d", "cf",   "al",
    };
    std::size_t begin = dot;
    while (begin > 0) {
        auto const c = static_cast<unsigned char>(text[begin - 1]);
        if (std::isalpha(c) == 0 && c != '.') {
            break;
        }
        --begin;
    }
    std::string word(text.substr(begin, dot - begin));
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return kAbbreviations.contains(word);
}

bool starts_sentence(std::string_view text, std::size_t pos)
{
    auto const* bytes = reinterpret_cast<std::uint8_t const*>(text.data());
    auto const length = static_cast<std::int32_t>(text.size());
    auto i = static_cast<std::int32_t>(pos);
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c == '"' || c == '\'' || c == '(') {
        if (i >= length) {
            return false;
        }
        U8_NEXT(bytes, i, length, c);
    }
    return c >= 0 && (u_isupper(c) || u_isdigit(c));
}

}  // namespace

std::vector<Span> sentence_spans(std::string_view text)
{
    std::vector<Span> spans;
    auto skip_space = [&](std::size_t pos) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) != 0) {
            ++pos;
        }
        return pos;
    };
    std::size_t start = skip_space(0);
    std::size_t i = start;
    while (i < text.size()) {
        char const c = text[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < text.size() && (text[end] == '.' || text[end] == '!' || text[end] == '?')) {
            ++end;
        }
        bool const single_dot = end == i + 1 && c == '.';
        while (end < text.size() && (text[end] == '"' || text[end] == '\'' || text[end] == ')' || text[end] == ']')) {
            ++end;
        }
        auto const next = skip_space(end);
        bool const split = next > end && next < text.size() && starts_sentence(text, next) &&
                           !(single_dot && is_abbreviation(text, i));
        if (split) {
            spans.push_back({start, end});
            start = next;
        }
        i = end;
    }
    auto last = text.size();
    while (last > start && std::isspace(static_cast<unsigned char>(text[last - 1])) != 0) {
        --last;
    }
    if (last > start) {
        spans.push_back({start, last});
    }
    return spans;
}

std::vector<std::string> split_sentences(std::string_view text)
{
    std::vector<std::string> sentences;
    for (auto span : sentence_spans(text)) {
        sentences.emplace_back(span.of(text));
    }
    return sentences;
}

std::vector<Span> noun_chunk_spans(std::string_view text)
{
    static PipelineConfig const kBoundaries{};
    auto const tokens = tokenize(text, kBoundaries);
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (auto const& token : tokens) {
        tags.push_back(pos_tag(token.surface));
    }
    auto adjacent = [&](std::size_t a) {
        auto const gap = text.substr(tokens[a].span.end, tokens[a + 1].span.begin - tokens[a].span.end);
        return std::all_of(gap.begin(), gap.end(), [](unsigned char c) { return std::isspace(c) != 0; });
    };

    std::vector<Span> chunks;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t j = i;
        auto const extendable = [&](std::size_t k) { return k + 1 < tokens.size() && adjacent(k); };
        if (tags[j] == PosTag::kDet) {
            if (!extendable(j)) {
                ++i;
                continue;
            }
            ++j;
        }
        while ((tags[j] == PosTag::kAdj || tags[j] == PosTag::kNum) && extendable(j)) {
            ++j;
        }
        // Noun/verb ambiguity: after a determiner or modifier ("the quick
        // fix") a verb-tagged word is read as the head noun.
        bool const head = tags[j] == PosTag::kNoun || (j > i && tags[j] == PosTag::kVerb);
        if (!head) {
            ++i;
            continue;
        }
        while (extendable(j) && tags[j + 1] == PosTag::kNoun) {
            ++j;
        }
        chunks.push_back({tokens[i].span.begin, tokens[j].span.end});
        i = j + 1;
    }
    return chunks;
}

std::vector<std::string> noun_chunks(std::string_view text)
{
    std::vector<std::string> chunks;
    for (auto span : noun_chunk_spans(text)) {
        chunks.emplace_back(span.of(text));
    }
    return chunks;
}

std::string RuleBasedAnnotator::lemma(std::string_view lowercase_token) const { return abnirml::lemmatize(lowercase_token); }

std::vector<Span> RuleBasedAnnotator::sentences(std::string_view text) const { return sentence_spans(text); }

std::vector<Span> RuleBasedAnnotator::noun_chunks(std::string_view text) const { return noun_chunk_spans(text); }

LemmaFileAnnotator::LemmaFileAnnotator(std::filesystem::path const& path)
    : m_lemmas(parse_tsv_map(read_file(path)))
{}

std::string LemmaFileAnnotator::lemma(std::string_view lowercase_token) const
{
    if (auto it = m_lemmas.find(std::string(lowercase_token)); it != m_lemmas.end()) {
        return it->second;
    }
    return RuleBasedAnnotator::lemma(lowercase_token);
}

}  // namespace abnirml
