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

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "abnirml/textproc.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

struct LemmaLexicon {
    std::unordered_map<std::string, std::string> exceptions;
    /// Exception targets plus words that merely look inflected ("news", "thing").
    std::unordered_set<std::string> fixed;

    static LemmaLexicon const& get()
    {
        static LemmaLexicon const kLexicon = [] {
            LemmaLexicon lex;
            auto lines = [](std::string_view text, auto&& fn) {
                std::size_t pos = 0;
                while (pos < text.size()) {
                    auto nl = text.find('\n', pos);
                    if (nl == std::string_view::npos) {
                        nl = text.size();
                    }
                    auto line = trim(text.substr(pos, nl - pos));
                    if (!line.empty()) {
                        fn(line);
                    }
                    pos = nl + 1;
                }
            };
            lines(lexicon::lemma_exceptions(), [&](std::string_view line) {
                auto const tab = line.find('\t');
                std::string lemma(trim(line.substr(tab + 1)));
                lex.fixed.insert(lemma);
                lex.exceptions.emplace(std::string(trim(line.substr(0, tab))), std::move(lemma));
            });
            lines(lexicon::lemma_protected(), [&](std::string_view line) { lex.fixed.emplace(line); });
            return lex;
        }();
        return kLexicon;
    }
};

bool vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (vowel(s[i]) || (s[i] == 'y' && i > 0)) {
            return true;
        }
    }
    return false;
}

bool all_alpha(std::string_view s)
{
    for (char c : s) {
        if (c < 'a' || c > 'z') {
            return false;
        }
    }
    return true;
}

/// Restores the base form of a stem left by stripping -ed or -ing.
std::string restore_verb_stem(std::string stem)
{
    auto const n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !vowel(stem[n - 1])) {
        char const c = stem[n - 1];
        if (c != 'l' && c != 's' && c != 'z' && c != 'f') {
            stem.pop_back();
        }
        return stem;
    }
    // Single-syllable consonant-vowel-consonant stems lost a silent e: "mak" -> "make".
    if (n >= 3 && !vowel(stem[n - 1]) && vowel(stem[n - 2]) && !vowel(stem[n - 3])) {
        char const c = stem[n - 1];
        int vowel_groups = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (vowel(stem[i]) && (i == 0 || !vowel(stem[i - 1]))) {
                ++vowel_groups;
            }
        }
        if (vowel_groups == 1 && c != 'w' && c != 'x' && c != 'y') {
            stem.push_back('e');
        }
    }
    return stem;
}

std::string lemmatize_once(std::string_view token, std::optional<PosTag> pos_hint)
{
    auto const& lex = LemmaLexicon::get();
    std::string word(token);
    if (auto it = lex.exceptions.find(word); it != lex.exceptions.end()) {
        return it->second;
    }
    if (lex.fixed.contains(word) || word.size() <= 3 || !all_alpha(word)) {
        return word;
    }
    bool const verb_rules = !pos_hint || *pos_hint == PosTag::kVerb || *pos_hint == PosTag::kAux;
    bool const noun_rules = !pos_hint || *pos_hint == PosTag::kNoun || *pos_hint == PosTag::kVerb;
    std::string_view w = word;

    if (noun_rules && w.ends_with('s')) {
        if (w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") || w.ends_with("ous")) {
            return word;
        }
        if (w.ends_with("ies") && w.size() > 4) {
            return std::string(w.substr(0, w.size() - 3)) + "y";
        }
        for (auto suffix : {"sses", "xes", "ches", "shes", "zes"}) {
            if (w.ends_with(suffix)) {
                return std::string(w.substr(0, w.size() - 2));
            }
        }
        return std::string(w.substr(0, w.size() - 1));
    }
    if (verb_rules && w.ends_with("ied") && w.size() > 4) {
        return std::string(w.substr(0, w.size() - 3)) + "y";
    }
    if (verb_rules && w.ends_with("ed") && !w.ends_with("eed")) {
        auto stem = w.substr(0, w.size() - 2);
        if (stem.size() >= 3 && has_vowel(stem)) {
            return restore_verb_stem(std::string(stem));
        }
        return word;
    }
    if (verb_rules && w.ends_with("ing")) {
        auto stem = w.substr(0, w.size() - 3);
        if (stem.size() >= 3 && has_vowel(stem)) {
            return restore_verb_stem(std::string(stem));
        }
    }
    return word;
}

}  // namespace

// Rules are applied until nothing changes, so every output is a fixed point
// ("meetings" -> "meeting" -> "meet").
std::string lemmatize(std::string_view token, std::optional<PosTag> pos_hint)
{
    std::string current(token);
    for (int round = 0; round < 8; ++round) {
        auto next = lemmatize_once(current, pos_hint);
        if (next == current) {
            break;
        }
        current = std::move(next);
    }
    return current;
}

}  // namespace abnirml
