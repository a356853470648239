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

#include "abnirml/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include <json.hpp>

#include "abnirml/error.hpp"
#include "abnirml/stats.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

using nlohmann::ordered_json;

TestResult summarize(std::string test_id, std::string stratum, std::vector<EffectRecord const*> const& records)
{
    TestResult r;
    r.test_id = std::move(test_id);
    r.stratum = std::move(stratum);
    r.n = records.size();
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(records.size());
    for (auto const* e : records) {
        r.effect_sum += e->effect;
        pairs.emplace_back(e->score1, e->score2);
    }
    if (r.n > 0) {
        r.s = static_cast<double>(r.effect_sum) / static_cast<double>(r.n);
    }
    if (r.n >= 2) {
        auto const tt = paired_t_test(pairs);
        r.t = tt.t;
        r.p = tt.p;
    }
    return r;
}

void count_cells(TestResult const& r, std::size_t& m)
{
    if (r.n > 0) {
        ++m;
    }
    for (auto const& s : r.strata) {
        count_cells(s, m);
    }
}

void mark(TestResult& r, double threshold)
{
    r.significant = r.n >= 2 && r.p < threshold;
    for (auto& s : r.strata) {
        mark(s, threshold);
    }
}

std::string with_thousands(std::size_t n)
{
    auto digits = std::to_string(n);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) {
            out += ',';
        }
        out += digits[i];
    }
    return out;
}

std::string cell(TestResult const& r)
{
    if (r.n == 0) {
        return "–";
    }
    return (r.significant ? "" : "* ") + format_score(r.s);
}

std::string csv_field(std::string const& v)
{
    if (v.find_first_of(",\"\n") == std::string::npos) {
        return v;
    }
    std::string out = "\"";
    for (char c : v) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return format_double(v);
}

ordered_json json_number(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json to_json(TestResult const& r)
{
    ordered_json out = {{"test_id", r.test_id}, {"stratum", r.stratum.empty() ? "all" : r.stratum},
                        {"n", r.n},             {"effect_sum", r.effect_sum},
                        {"s", json_number(r.s)}, {"t", json_number(r.t)},
                        {"p", json_number(r.p)}, {"significant", r.significant}};
    if (!r.strata.empty()) {
        out["strata"] = ordered_json::array();
        for (auto const& s : r.strata) {
            out["strata"].push_back(to_json(s));
        }
    }
    return out;
}

void csv_rows(TestResult const& r, std::string& out)
{
    out += csv_field(r.test_id) + "," + csv_field(r.stratum.empty() ? "all" : r.stratum) + "," +
           std::to_string(r.n) + "," + (r.n > 0 ? number(r.s) : "") + "," + number(r.t) + "," + number(r.p) + "," +
           (r.significant ? "true" : "false") + "\n";
    for (auto const& s : r.strata) {
        csv_rows(s, out);
    }
}

void markdown_rows(TestResult const& r, std::string& out)
{
    auto const label = r.stratum.empty() ? r.test_id : "  " + r.test_id + " [" + r.stratum + "]";
    out += "| " + label + " | " + with_thousands(r.n) + " | " + cell(r) + " |\n";
    for (auto const& s : r.strata) {
        markdown_rows(s, out);
    }
}

}  // namespace

ReportFormat parse_report_format(std::string_view name)
{
    if (name == "markdown" || name == "md") {
        return ReportFormat::kMarkdown;
    }
    if (name == "csv") {
        return ReportFormat::kCsv;
    }
    if (name == "json") {
        return ReportFormat::kJson;
    }
    throw ConfigError("unknown report format '" + std::string(name) + "' (markdown, csv, json)");
}

TestResult analyze(TestSet const& test, std::span<EffectRecord const> effects)
{
    using Key = std::tuple<std::string_view, std::string_view, std::string_view>;
    std::map<Key, PairSample const*> by_key;
    for (auto const& s : test.samples) {
        if (!by_key.emplace(Key{s.query.id, s.d1.id, s.d2.id}, &s).second) {
            throw ValidationError("test " + test.id + " has two samples for query_id=" + s.query.id +
                                  " d1_id=" + s.d1.id + " d2_id=" + s.d2.id);
        }
    }
    if (effects.size() != test.samples.size()) {
        throw ValidationError("effects file has " + std::to_string(effects.size()) + " records but test " + test.id +
                              " has " + std::to_string(test.samples.size()) + " samples");
    }
    std::vector<EffectRecord const*> all;
    std::vector<std::pair<EffectRecord const*, PairSample const*>> joined;
    std::map<Key, bool> seen;
    for (auto const& e : effects) {
        Key const key{e.query_id, e.d1_id, e.d2_id};
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            throw ValidationError("effect record query_id=" + e.query_id + " d1_id=" + e.d1_id + " d2_id=" + e.d2_id +
                                  " matches no sample of test " + test.id);
        }
        if (!seen.emplace(key, true).second) {
            throw ValidationError("duplicate effect record query_id=" + e.query_id + " d1_id=" + e.d1_id);
        }
        all.push_back(&e);
        joined.emplace_back(&e, it->second);
    }

    auto result = summarize(test.id, "", all);
    auto add_stratum = [&](std::string name, auto&& keep) {
        std::vector<EffectRecord const*> part;
        for (auto const& [e, s] : joined) {
            if (keep(*s)) {
                part.push_back(e);
            }
        }
        result.strata.push_back(summarize(test.id, std::move(name), part));
    };
    auto grade = [](PairSample const& s) {
        auto it = s.meta.find("grade");
        return it == s.meta.end() ? -1 : std::stoi(it->second);
    };

    if (test.strategy == Strategy::kTmt) {
        add_stratum("rel01", [&](PairSample const& s) { auto g = grade(s); return g == 0 || g == 1; });
        add_stratum("rel23", [&](PairSample const& s) { return grade(s) >= 2; });
    } else if (test.strategy == Strategy::kDtt) {
        for (char const* field : {"category", "source", "spellchecked"}) {
            std::map<std::string, bool> values;
            for (auto const& s : test.samples) {
                if (auto it = s.meta.find(field); it != s.meta.end()) {
                    values[it->second] = true;
                }
            }
            if (values.size() < 2 && !(std::string_view(field) == "spellchecked" && !values.empty())) {
                continue;
            }
            for (auto const& [value, _] : values) {
                add_stratum(std::string(field) + "=" + value, [&](PairSample const& s) {
                    auto it = s.meta.find(field);
                    return it != s.meta.end() && it->second == value;
                });
            }
        }
    }
    return result;
}

std::size_t scored_cells(std::span<TestResult const> results)
{
    std::size_t m = 0;
    for (auto const& r : results) {
        count_cells(r, m);
    }
    return m;
}

std::size_t apply_bonferroni(std::vector<TestResult>& results, double alpha)
{
    auto const m = scored_cells(results);
    auto const threshold = m == 0 ? 0.0 : alpha / static_cast<double>(m);
    for (auto& r : results) {
        mark(r, threshold);
    }
    return m;
}

std::string format_score(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", s);
    std::string out = buf;
    if (out == "-0.00" || out == "0.00") {
        return "0.00";
    }
    if (out.front() == '-') {
        return "−" + out.substr(1);
    }
    return "+" + out;
}

std::string render_report(std::span<TestResult const> results, ReportFormat format, double alpha)
{
    auto const m = scored_cells(results);
    switch (format) {
    case ReportFormat::kMarkdown: {
        std::string out = "| Test | Samples | Score |\n|:--|--:|--:|\n";
        if (results.empty()) {
            return out;
        }
        for (auto const& r : results) {
            markdown_rows(r, out);
        }
        out += "\nScores marked * are not significant (two-sided paired t-test, p < " + format_double(alpha) +
               " / m, Bonferroni m = " + std::to_string(m) + ").\n";
        return out;
    }
    case ReportFormat::kCsv: {
        std::string out = "test_id,stratum,n,s,t,p,significant\n";
        for (auto const& r : results) {
            csv_rows(r, out);
        }
        return out;
    }
    case ReportFormat::kJson: {
        ordered_json doc = {{"alpha", alpha}, {"m", m}, {"results", ordered_json::array()}};
        for (auto const& r : results) {
            doc["results"].push_back(to_json(r));
        }
        return doc.dump(2) + "\n";
    }
    }
    throw ConfigError("unknown report format");
}

}  // namespace abnirml
