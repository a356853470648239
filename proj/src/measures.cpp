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

#include "abnirml/measures.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "abnirml/error.hpp"

namespace abnirml {

std::string_view to_string(Characteristic c)
{
    switch (c) {
    case Characteristic::kRelevance:
        return "relevance";
    case Characteristic::kLength:
        return "length";
    case Characteristic::kTf:
        return "tf";
    case Characteristic::kSumTf:
        return "sumtf";
    case Characteristic::kOverlap:
        return "overlap";
    }
    return "?";
}

Characteristic parse_characteristic(std::string_view name)
{
    std::string key;
    for (char c : name) {
        if (c != '-' && c != '_') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    static std::unordered_map<std::string, Characteristic> const kNames = {
        {"relevance", Characteristic::kRelevance}, {"rel", Characteristic::kRelevance},
        {"length", Characteristic::kLength},       {"len", Characteristic::kLength},
        {"tf", Characteristic::kTf},               {"sumtf", Characteristic::kSumTf},
        {"overlap", Characteristic::kOverlap},
    };
    auto it = kNames.find(key);
    if (it == kNames.end()) {
        throw ConfigError("unknown characteristic '" + std::string(name) + "'");
    }
    return it->second;
}

std::int64_t doc_length(std::string_view doc, PipelineConfig const& config)
{
    return static_cast<std::int64_t>(remove_stopwords(tokenize(doc, config), config).size());
}

TfVector tf_vector(std::string_view query, std::string_view doc, PipelineConfig const& config)
{
    TfVector tf;
    for (auto& term : analyze(query, config)) {
        tf.emplace(std::move(term), 0);
    }
    if (tf.empty()) {
        return tf;
    }
    for (auto const& term : analyze(doc, config)) {
        if (auto it = tf.find(term); it != tf.end()) {
            ++it->second;
        }
    }
    return tf;
}

std::int64_t sum_tf(TfVector const& tf)
{
    std::int64_t total = 0;
    for (auto const& [_, count] : tf) {
        total += count;
    }
    return total;
}

std::int64_t sum_tf(std::string_view query, std::string_view doc, PipelineConfig const& config)
{
    return sum_tf(tf_vector(query, doc, config));
}

Ratio overlap(std::int64_t sum_tf, std::int64_t doc_length)
{
    if (doc_length <= 0) {
        throw ValidationError("overlap is undefined for a document with no non-stopword tokens");
    }
    return Ratio{sum_tf, doc_length};
}

Ratio overlap(std::string_view query, std::string_view doc, PipelineConfig const& config)
{
    return overlap(sum_tf(query, doc, config), doc_length(doc, config));
}

bool tf_dominates(TfVector const& a, TfVector const& b)
{
    if (a.size() != b.size() ||
        !std::equal(a.begin(), a.end(), b.begin(), [](auto const& x, auto const& y) { return x.first == y.first; })) {
        throw ValidationError("tf_dominates: vectors have different term sets");
    }
    bool strictly = false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->second < ib->second) {
            return false;
        }
        strictly = strictly || ia->second > ib->second;
    }
    return strictly;
}

Measurement measure(std::string_view query, std::string_view doc, int relevance, PipelineConfig const& config)
{
    Measurement m;
    m.relevance = relevance;
    m.length = doc_length(doc, config);
    m.tf = tf_vector(query, doc, config);
    m.sum_tf = sum_tf(m.tf);
    return m;
}

}  // namespace abnirml
