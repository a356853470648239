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

#include "abnirml/pairtest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "abnirml/error.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

using nlohmann::json;

auto sample_key(PairSample const& s)
{
    return std::tie(s.query.id, s.d1.id, s.d2.id);
}

struct PairHash {
    std::size_t operator()(std::pair<std::string_view, std::string_view> const& p) const noexcept
    {
        return fnv1a64_fields({p.first, p.second});
    }
};

template <typename F>
void for_each_json_line(std::string_view contents, std::string const& source, F&& fn)
{
    std::size_t pos = 0;
    std::size_t number = 0;
    while (pos < contents.size()) {
        auto nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = contents.size();
        }
        auto line = contents.substr(pos, nl - pos);
        pos = nl + 1;
        ++number;
        if (trim(line).empty()) {
            continue;
        }
        json value;
        try {
            value = json::parse(line);
        } catch (json::exception const& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), source, number);
        }
        if (!value.is_object()) {
            throw ParseError("expected a JSON object", source, number);
        }
        try {
            fn(value, number);
        } catch (json::exception const& e) {
            throw ParseError(std::string("bad field: ") + e.what(), source, number);
        }
    }
}

std::string required_string(json const& obj, char const* key, std::string const& source, std::size_t line)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(std::string("missing string field '") + key + "'", source, line);
    }
    return it->get<std::string>();
}

double required_number(json const& obj, char const* key, std::string const& source, std::size_t line)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(std::string("missing numeric field '") + key + "'", source, line);
    }
    return it->get<double>();
}

}  // namespace

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::kMmt:
        return "MMT";
    case Strategy::kTmt:
        return "TMT";
    case Strategy::kDtt:
        return "DTT";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name)
{
    if (name == "MMT" || name == "mmt") {
        return Strategy::kMmt;
    }
    if (name == "TMT" || name == "tmt") {
        return Strategy::kTmt;
    }
    if (name == "DTT" || name == "dtt") {
        return Strategy::kDtt;
    }
    throw ValidationError("unknown test strategy '" + std::string(name) + "'");
}

int effect(double score1, double score2, double delta)
{
    if (!std::isfinite(score1) || !std::isfinite(score2)) {
        throw ValidationError("effect of a non-finite score");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ValidationError("delta must be a finite non-negative number");
    }
    auto const diff = score1 - score2;
    if (diff > delta) {
        return 1;
    }
    if (diff < -delta) {
        return -1;
    }
    return 0;
}

double summary_score(std::span<int const> effects)
{
    if (effects.empty()) {
        throw ValidationError("summary score of an empty test set is undefined");
    }
    auto const sum = std::accumulate(effects.begin(), effects.end(), std::int64_t{0});
    return static_cast<double>(sum) / static_cast<double>(effects.size());
}

double summary_score(std::span<EffectRecord const> records)
{
    std::vector<int> effects;
    effects.reserve(records.size());
    for (auto const& r : records) {
        effects.push_back(r.effect);
    }
    return summary_score(effects);
}

void canonical_sort(std::vector<PairSample>& samples)
{
    std::stable_sort(samples.begin(), samples.end(),
                     [](PairSample const& a, PairSample const& b) { return sample_key(a) < sample_key(b); });
}

bool is_canonical(std::vector<PairSample> const& samples)
{
    return std::is_sorted(samples.begin(), samples.end(),
                          [](PairSample const& a, PairSample const& b) { return sample_key(a) < sample_key(b); });
}

std::vector<EffectRecord> evaluate(TestSet const& test, Scorer& scorer, double delta, std::size_t jobs)
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ConfigError("delta must be a finite non-negative number");
    }
    // Distinct (query text, doc text) pairs in first-use order.
    std::unordered_map<std::pair<std::string_view, std::string_view>, std::size_t, PairHash> slot_of;
    std::vector<ScoreRequest> requests;
    std::vector<std::size_t> owner;  // first sample using each request
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    slots.reserve(test.samples.size());
    auto slot = [&](std::string_view q, std::string_view d, std::size_t sample) {
        auto [it, inserted] = slot_of.emplace(std::pair{q, d}, requests.size());
        if (inserted) {
            requests.push_back({q, d});
            owner.push_back(sample);
        }
        return it->second;
    };
    for (std::size_t i = 0; i < test.samples.size(); ++i) {
        auto const& s = test.samples[i];
        auto const a = slot(s.query.text, s.d1.text, i);
        auto const b = slot(s.query.text, s.d2.text, i);
        slots.emplace_back(a, b);
    }

    auto describe = [&](std::size_t request) {
        auto const& s = test.samples[owner[request]];
        return "sample query_id=" + s.query.id + " d1_id=" + s.d1.id + " d2_id=" + s.d2.id;
    };

    std::vector<double> scores(requests.size());
    auto const workers = scorer.concurrent() ? std::max<std::size_t>(1, jobs) : 1;
    auto const chunk = std::max<std::size_t>(1, (requests.size() + workers - 1) / workers);
    auto const chunks = (requests.size() + chunk - 1) / chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        auto const begin = c * chunk;
        auto const end = std::min(requests.size(), begin + chunk);
        auto const part = std::span<ScoreRequest const>(requests).subspan(begin, end - begin);
        std::vector<double> got;
        try {
            got = scorer.score_batch(part);
        } catch (ScorerError const& e) {
            // Request ids are "<batch>:<index>"; map the index back to a sample.
            auto const& id = e.request_id();
            auto const colon = id.rfind(':');
            std::size_t index = 0;
            if (colon != std::string::npos) {
                auto digits = std::string_view(id).substr(colon + 1);
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
                if (ec == std::errc{} && ptr == digits.data() + digits.size() && index < part.size()) {
                    throw ScorerError(std::string(e.what()) + " while scoring " + describe(begin + index));
                }
            }
            throw;
        }
        if (got.size() != part.size()) {
            throw ScorerError("scorer returned " + std::to_string(got.size()) + " scores for " +
                              std::to_string(part.size()) + " requests");
        }
        for (std::size_t k = 0; k < got.size(); ++k) {
            if (!std::isfinite(got[k])) {
                throw ScorerError("non-finite score for " + describe(begin + k));
            }
            scores[begin + k] = got[k];
        }
    });

    std::vector<EffectRecord> records;
    records.reserve(test.samples.size());
    for (std::size_t i = 0; i < test.samples.size(); ++i) {
        auto const& s = test.samples[i];
        EffectRecord r{s.query.id, s.d1.id, s.d2.id, scores[slots[i].first], scores[slots[i].second], 0};
        r.effect = effect(r.score1, r.score2, delta);
        records.push_back(std::move(r));
    }
    return records;
}

std::string serialize_test_set(TestSet const& test)
{
    std::string out;
    json header = {{"test_id", test.id}, {"strategy", to_string(test.strategy)}, {"provenance", test.provenance}};
    out += header.dump() + '\n';
    for (auto const& s : test.samples) {
        json line = {{"test_id", test.id},      {"strategy", to_string(test.strategy)},
                     {"query_id", s.query.id},  {"query_text", s.query.text},
                     {"d1_id", s.d1.id},        {"d1_text", s.d1.text},
                     {"d2_id", s.d2.id},        {"d2_text", s.d2.text},
                     {"meta", s.meta}};
        out += line.dump() + '\n';
    }
    return out;
}

TestSet parse_test_set(std::string_view contents, std::string const& source)
{
    TestSet test;
    bool have_header = false;
    for_each_json_line(contents, source, [&](json const& obj, std::size_t line) {
        if (!have_header) {
            if (!obj.contains("provenance")) {
                throw ParseError("first line must be the test-set header", source, line);
            }
            test.id = required_string(obj, "test_id", source, line);
            test.strategy = parse_strategy(required_string(obj, "strategy", source, line));
            test.provenance = obj.at("provenance");
            have_header = true;
            return;
        }
        if (required_string(obj, "test_id", source, line) != test.id) {
            throw ParseError("sample belongs to a different test", source, line);
        }
        PairSample s;
        s.query = {required_string(obj, "query_id", source, line), required_string(obj, "query_text", source, line)};
        s.d1 = {required_string(obj, "d1_id", source, line), required_string(obj, "d1_text", source, line)};
        s.d2 = {required_string(obj, "d2_id", source, line), required_string(obj, "d2_text", source, line)};
        if (auto it = obj.find("meta"); it != obj.end()) {
            s.meta = it->get<std::map<std::string, std::string>>();
        }
        test.samples.push_back(std::move(s));
    });
    if (!have_header) {
        throw ParseError("empty test-set file", source);
    }
    return test;
}

TestSet load_test_set(std::filesystem::path const& path)
{
    return parse_test_set(read_file(path), path.string());
}

std::string serialize_effects(std::span<EffectRecord const> records)
{
    std::string out;
    for (auto const& r : records) {
        json line = {{"query_id", r.query_id}, {"d1_id", r.d1_id},   {"d2_id", r.d2_id},
                     {"score1", r.score1},     {"score2", r.score2}, {"effect", r.effect}};
        out += line.dump() + '\n';
    }
    return out;
}

std::vector<EffectRecord> parse_effects(std::string_view contents, std::string const& source)
{
    std::vector<EffectRecord> records;
    for_each_json_line(contents, source, [&](json const& obj, std::size_t line) {
        EffectRecord r;
        r.query_id = required_string(obj, "query_id", source, line);
        r.d1_id = required_string(obj, "d1_id", source, line);
        r.d2_id = required_string(obj, "d2_id", source, line);
        r.score1 = required_number(obj, "score1", source, line);
        r.score2 = required_number(obj, "score2", source, line);
        auto const e = required_number(obj, "effect", source, line);
        if (e != -1.0 && e != 0.0 && e != 1.0) {
            throw ParseError("effect must be -1, 0 or 1", source, line);
        }
        r.effect = static_cast<int>(e);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<EffectRecord> load_effects(std::filesystem::path const& path)
{
    return parse_effects(read_file(path), path.string());
}

}  // namespace abnirml
