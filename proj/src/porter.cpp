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

#include <array>
#include <string>
#include <string_view>

#include "abnirml/textproc.hpp"

// Porter's suffix-stripping algorithm as published in 1980 (no later
// departures such as "logi" -> "log" or "bli" -> "ble"). Within each step the
// first listed suffix that matches is the only one considered, whether or not
// its condition holds.

namespace abnirml {

namespace {

class Stemmer {
  public:
    explicit Stemmer(std::string_view word) : m_word(word) {}

    std::string run()
    {
        if (m_word.size() <= 2) {
            return m_word;
        }
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return m_word;
    }

  private:
    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    [[nodiscard]] bool consonant(std::size_t i) const
    {
        switch (m_word[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 || !consonant(i - 1);
        default:
            return true;
        }
    }

    /// Number of VC sequences in m_word[0, len).
    [[nodiscard]] int measure(std::size_t len) const
    {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) {
            ++i;
        }
        while (i < len) {
            while (i < len && !consonant(i)) {
                ++i;
            }
            if (i >= len) {
                break;
            }
            while (i < len && consonant(i)) {
                ++i;
            }
            ++m;
        }
        return m;
    }

    [[nodiscard]] bool has_vowel(std::size_t len) const
    {
        for (std::size_t i = 0; i < len; ++i) {
            if (!consonant(i)) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool double_consonant(std::size_t len) const
    {
        return len >= 2 && m_word[len - 1] == m_word[len - 2] && consonant(len - 1);
    }

    /// consonant-vowel-consonant ending, last consonant not w, x or y.
    [[nodiscard]] bool cvc(std::size_t len) const
    {
        if (len < 3 || !consonant(len - 3) || consonant(len - 2) || !consonant(len - 1)) {
            return false;
        }
        char const c = m_word[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    [[nodiscard]] bool ends(std::string_view suffix) const { return std::string_view(m_word).ends_with(suffix); }

    [[nodiscard]] std::size_t stem_len(std::string_view suffix) const { return m_word.size() - suffix.size(); }

    void replace(std::string_view suffix, std::string_view replacement)
    {
        m_word.resize(stem_len(suffix));
        m_word.append(replacement);
    }

    template <std::size_t N, typename Condition>
    void apply_first(std::array<Rule, N> const& rules, Condition condition)
    {
        for (auto const& rule : rules) {
            if (ends(rule.suffix)) {
                if (condition(rule, stem_len(rule.suffix))) {
                    replace(rule.suffix, rule.replacement);
                }
                return;
            }
        }
    }

    void step1a()
    {
        static constexpr std::array<Rule, 4> kRules{{{"sses", "ss"}, {"ies", "i"}, {"ss", "ss"}, {"s", ""}}};
        apply_first(kRules, [](Rule const&, std::size_t) { return true; });
    }

    void step1b()
    {
        if (ends("eed")) {
            if (measure(stem_len("eed")) > 0) {
                replace("eed", "ee");
            }
            return;
        }
        std::string_view suffix;
        if (ends("ed")) {
            suffix = "ed";
        } else if (ends("ing")) {
            suffix = "ing";
        } else {
            return;
        }
        if (!has_vowel(stem_len(suffix))) {
            return;
        }
        replace(suffix, "");
        if (ends("at") || ends("bl") || ends("iz")) {
            m_word.push_back('e');
        } else if (double_consonant(m_word.size())) {
            char const last = m_word.back();
            if (last != 'l' && last != 's' && last != 'z') {
                m_word.pop_back();
            }
        } else if (measure(m_word.size()) == 1 && cvc(m_word.size())) {
            m_word.push_back('e');
        }
    }

    void step1c()
    {
        if (ends("y") && has_vowel(m_word.size() - 1)) {
            m_word.back() = 'i';
        }
    }

    void step2()
    {
        static constexpr std::array<Rule, 20> kRules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},    {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},  {"eli", "e"},        {"ousli", "ous"},
            {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},   {"alism", "al"},     {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},   {"iviti", "ive"},    {"biliti", "ble"},
        }};
        apply_first(kRules, [this](Rule const&, std::size_t len) { return measure(len) > 0; });
    }

    void step3()
    {
        static constexpr std::array<Rule, 7> kRules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
        }};
        apply_first(kRules, [this](Rule const&, std::size_t len) { return measure(len) > 0; });
    }

    void step4()
    {
        static constexpr std::array<Rule, 19> kRules{{
            {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""}, {"ible", ""},
            {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ion", ""}, {"ou", ""},   {"ism", ""},
            {"ate", ""},  {"iti", ""},  {"ous", ""},  {"ive", ""}, {"ize", ""},
        }};
        apply_first(kRules, [this](Rule const& rule, std::size_t len) {
            if (measure(len) <= 1) {
                return false;
            }
            if (rule.suffix == "ion") {
                return len > 0 && (m_word[len - 1] == 's' || m_word[len - 1] == 't');
            }
            return true;
        });
    }

    void step5a()
    {
        if (!ends("e")) {
            return;
        }
        auto const len = m_word.size() - 1;
        auto const m = measure(len);
        if (m > 1 || (m == 1 && !cvc(len))) {
            m_word.pop_back();
        }
    }

    void step5b()
    {
        if (ends("ll") && measure(m_word.size() - 1) > 1) {
            m_word.pop_back();
        }
    }

    std::string m_word;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace abnirml
