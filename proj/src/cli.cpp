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

#include "abnirml/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "abnirml/corpus.hpp"
#include "abnirml/dtt.hpp"
#include "abnirml/error.hpp"
#include "abnirml/external_scorer.hpp"
#include "abnirml/manifest.hpp"
#include "abnirml/mmt.hpp"
#include "abnirml/pairtest.hpp"
#include "abnirml/report.hpp"
#include "abnirml/scorer.hpp"
#include "abnirml/tmt.hpp"
#include "abnirml/util.hpp"

namespace abnirml {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path base_of(fs::path const& output)
{
    auto base = output.parent_path();
    return base.empty() ? fs::path(".") : base;
}

/// Options shared by several subcommands.
struct Common {
    std::string stopwords;
    std::size_t jobs = 1;

    [[nodiscard]] PipelineConfig pipeline() const
    {
        return stopwords.empty() ? PipelineConfig::defaults() : PipelineConfig::with_stopword_file(stopwords);
    }
    void describe(RunManifest& manifest, fs::path const& base, PipelineConfig const& config) const
    {
        if (!stopwords.empty()) {
            manifest.add_input("stopwords", stopwords, base);
        }
        manifest.parameters["stopwords_sha256"] = config.stopwords_digest();
        manifest.parameters["prng"] = Rng::kName;
    }
};

struct ScorerOptions {
    std::string spec = "bm25";
    std::string collection;
    std::string stats;
    std::string cache_dir;
    double k1 = 1.2;
    double b = 0.75;
    bool clamp_idf = false;
    double timeout_s = 60.0;
};

json stats_to_json(CollectionStats const& stats, PipelineConfig const& config)
{
    json df = json::object();
    for (auto const& [term, count] : stats.doc_freq) {
        df[term] = count;
    }
    return {{"num_docs", stats.num_docs},
            {"total_len", stats.total_len},
            {"avg_doc_len", stats.avg_doc_len},
            {"stopwords_sha256", config.stopwords_digest()},
            {"digest", stats.digest()},
            {"doc_freq", df}};
}

CollectionStats stats_from_file(fs::path const& path, PipelineConfig const& config)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (json::exception const& e) {
        throw ParseError(std::string("invalid statistics file: ") + e.what(), path.string());
    }
    CollectionStats stats;
    try {
        stats.num_docs = j.at("num_docs").get<std::size_t>();
        stats.total_len = j.at("total_len").get<std::size_t>();
        stats.avg_doc_len = j.at("avg_doc_len").get<double>();
        for (auto const& [term, count] : j.at("doc_freq").items()) {
            stats.doc_freq.emplace(term, count.get<std::size_t>());
        }
        if (j.at("digest").get<std::string>() != stats.digest()) {
            throw ValidationError(path.string() + ": statistics digest mismatch");
        }
        if (j.at("stopwords_sha256").get<std::string>() != config.stopwords_digest()) {
            throw ConfigError(path.string() + ": statistics were computed with a different stopword list");
        }
    } catch (json::exception const& e) {
        throw ParseError(std::string("invalid statistics file: ") + e.what(), path.string());
    }
    return stats;
}

std::unique_ptr<Scorer> make_scorer(ScorerOptions const& o, PipelineConfig const& config, RunManifest& manifest,
                                    fs::path const& base)
{
    std::unique_ptr<Scorer> inner;
    if (o.spec == "bm25") {
        CollectionStats stats;
        if (!o.stats.empty()) {
            stats = stats_from_file(o.stats, config);
            manifest.add_input("stats", o.stats, base);
        } else if (!o.collection.empty()) {
            stats = compute_stats_from_file(o.collection, config);
            manifest.add_input("collection", o.collection, base);
        } else {
            throw ConfigError("--scorer bm25 needs --collection or --stats for its term statistics");
        }
        inner = std::make_unique<Bm25Scorer>(std::move(stats), config, Bm25Params{o.k1, o.b, o.clamp_idf});
    } else if (o.spec.starts_with("ext:") && o.spec.size() > 4) {
        ExternalScorer::Options eo;
        eo.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(o.timeout_s * 1000.0));
        inner = ExternalScorer::open(o.spec.substr(4), eo);
    } else {
        throw ConfigError("unknown scorer '" + o.spec + "' (bm25 or ext:<command or host:port>)");
    }
    manifest.parameters["scorer"] = inner->id();
    // The environment wins over --cache-dir so that a shared cache can be
    // imposed on every invocation of a pipeline.
    std::string cache = o.cache_dir;
    if (char const* env = std::getenv("ABNIRML_CACHE"); env != nullptr && *env != '\0') {
        cache = env;
    }
    if (cache.empty()) {
        return std::make_unique<CachedScorer>(std::move(inner));
    }
    return std::make_unique<CachedScorer>(std::move(inner), cache);
}

void add_scorer_options(CLI::App* app, ScorerOptions& o)
{
    app->add_option("--scorer", o.spec, "bm25 | ext:<command> | ext:<host:port>")->capture_default_str();
    app->add_option("--stats", o.stats, "term statistics written by `abnirml stats` (bm25)");
    app->add_option("--cache-dir", o.cache_dir, "persistent score cache ($ABNIRML_CACHE takes precedence)");
    app->add_option("--k1", o.k1, "BM25 k1")->capture_default_str();
    app->add_option("--b", o.b, "BM25 b")->capture_default_str();
    app->add_flag("--clamp-idf", o.clamp_idf, "clamp negative idf to zero (BM25)");
    app->add_option("--timeout", o.timeout_s, "external scorer response timeout in seconds")->capture_default_str();
}

json delta_to_json(DeltaConfig const& d)
{
    return {{"scorer_id", d.scorer_id},         {"delta", d.delta},
            {"run_sha256", d.run_digest},       {"top_k_rescore", d.top_k_rescore},
            {"top_k_diff", d.top_k_diff},       {"queries_used", d.queries_used},
            {"queries_skipped", d.queries_skipped}, {"differences", d.differences}};
}

void finish(fs::path const& out, std::string const& contents, RunManifest manifest)
{
    write_file_atomic(out, contents);
    write_manifest(std::move(manifest), out);
}

}  // namespace

int dispatch(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Behavioral pair tests for ranking functions", "abnirml"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--stopwords", common.stopwords, "stopword list, one term per line (default: bundled)");
    };
    auto add_jobs = [&](CLI::App* sub) {
        sub->add_option("--jobs,-j", common.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    };
    std::optional<int> exit_override;

    // stats
    std::string collection_path;
    std::string out_path;
    auto* stats_cmd = app.add_subcommand("stats", "compute collection term statistics");
    stats_cmd->add_option("--collection", collection_path, "docid<TAB>text file")->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("--out", out_path, "output JSON")->required();
    add_common(stats_cmd);

    // calibrate
    ScorerOptions scorer_opts;
    std::string run_path;
    std::string queries_path;
    CalibrationOptions calib;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "derive delta from a run's top results");
    calibrate_cmd->add_option("--run", run_path, "TREC run file")->required()->check(CLI::ExistingFile);
    calibrate_cmd->add_option("--queries", queries_path, "qid<TAB>text file")->required()->check(CLI::ExistingFile);
    calibrate_cmd->add_option("--collection", scorer_opts.collection, "docid<TAB>text file")
        ->required()
        ->check(CLI::ExistingFile);
    calibrate_cmd->add_option("--top-k", calib.top_k_rescore, "documents rescored per query")->capture_default_str();
    calibrate_cmd->add_option("--top-diff", calib.top_k_diff, "head size for adjacent differences")
        ->capture_default_str();
    calibrate_cmd->add_option("--out", out_path, "output JSON")->required();
    add_scorer_options(calibrate_cmd, scorer_opts);
    add_common(calibrate_cmd);

    // build
    std::string qrels_path;
    std::uint64_t seed = 0;
    std::string lemma_file;
    auto* build_cmd = app.add_subcommand("build", "construct a test set");
    build_cmd->require_subcommand(1);
    auto add_judged_inputs = [&](CLI::App* sub) {
        sub->add_option("--qrels", qrels_path, "TREC qrels")->required()->check(CLI::ExistingFile);
        sub->add_option("--queries", queries_path, "qid<TAB>text file")->required()->check(CLI::ExistingFile);
        sub->add_option("--collection", collection_path, "docid<TAB>text file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "output test set (JSON lines)")->required();
        add_common(sub);
        add_jobs(sub);
    };

    std::string variable;
    std::string control;
    std::vector<std::string> tolerances;
    auto* mmt_cmd = build_cmd->add_subcommand("mmt", "measure-and-match test");
    mmt_cmd->add_option("--variable", variable, "relevance|length|tf|sumtf|overlap")->required();
    mmt_cmd->add_option("--control", control, "relevance|length|tf|sumtf|overlap")->required();
    mmt_cmd->add_option("--tolerance", tolerances, "control tolerance, e.g. length=2 or overlap=1e-4");
    add_judged_inputs(mmt_cmd);

    std::string kind;
    std::string expansion_file;
    auto* tmt_cmd = build_cmd->add_subcommand("tmt", "textual-manipulation test");
    tmt_cmd->add_option("--kind", kind, "manipulation, e.g. shuffle-words")->required();
    tmt_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    tmt_cmd->add_option("--expansion-file", expansion_file, "docid<TAB>expansion text")->check(CLI::ExistingFile);
    tmt_cmd->add_option("--lemma-file", lemma_file, "form<TAB>lemma overrides")->check(CLI::ExistingFile);
    add_judged_inputs(tmt_cmd);

    std::string task;
    std::string pairs_path;
    std::string l6_path;
    double rate = 0.1;
    auto* dtt_cmd = build_cmd->add_subcommand("dtt", "dataset-transfer test");
    dtt_cmd->add_option("--task", task, "fluency|formality|summ")->required();
    dtt_cmd->add_option("--pairs", pairs_path, "normalized pair file (JSON lines)")->required()->check(
        CLI::ExistingFile);
    dtt_cmd->add_option("--l6", l6_path, "question index for formality: key<TAB>title")->check(CLI::ExistingFile);
    dtt_cmd->add_option("--rate", rate, "summarization subsample rate")->capture_default_str();
    dtt_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    dtt_cmd->add_option("--lemma-file", lemma_file, "form<TAB>lemma overrides")->check(CLI::ExistingFile);
    dtt_cmd->add_option("--out", out_path, "output test set (JSON lines)")->required();
    add_common(dtt_cmd);

    // run
    std::string test_path;
    std::optional<double> delta;
    std::string delta_file;
    std::string calibrate_run;
    auto* run_cmd = app.add_subcommand("run", "score a test set");
    run_cmd->add_option("--test", test_path, "test set (JSON lines)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--collection", scorer_opts.collection, "collection for BM25 statistics")
        ->check(CLI::ExistingFile);
    auto* delta_opt = run_cmd->add_option("--delta", delta, "effect threshold");
    auto* delta_file_opt =
        run_cmd->add_option("--delta-file", delta_file, "output of `abnirml calibrate`")->check(CLI::ExistingFile);
    auto* calibrate_opt =
        run_cmd->add_option("--calibrate", calibrate_run, "calibrate delta on this run file first")
            ->check(CLI::ExistingFile);
    run_cmd->add_option("--queries", queries_path, "queries for --calibrate")->check(CLI::ExistingFile);
    delta_opt->excludes(delta_file_opt)->excludes(calibrate_opt);
    delta_file_opt->excludes(calibrate_opt);
    run_cmd->add_option("--out", out_path, "effects (JSON lines)")->required();
    add_scorer_options(run_cmd, scorer_opts);
    add_common(run_cmd);
    add_jobs(run_cmd);

    // report
    std::vector<std::string> test_paths;
    std::vector<std::string> effects_paths;
    std::string format = "markdown";
    double alpha = kDefaultAlpha;
    auto* report_cmd = app.add_subcommand("report", "significance testing and tables");
    report_cmd->add_option("--test", test_paths, "test set; repeat, paired with --effects")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--effects", effects_paths, "effects file; repeat")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--format", format, "markdown|csv|json")->capture_default_str();
    report_cmd->add_option("--alpha", alpha, "family-wise significance level")->capture_default_str();
    report_cmd->add_option("--out", out_path, "output file (default: stdout, no manifest)");

    // verify
    std::vector<std::string> manifests;
    auto* verify_cmd = app.add_subcommand("verify", "re-hash the files listed in manifests");
    verify_cmd->add_option("manifests", manifests, "*.manifest.json files")->required();

    // conformance
    std::size_t requests = 1000;
    auto* conformance_cmd = app.add_subcommand("conformance", "check an external scorer against the protocol");
    conformance_cmd->add_option("--scorer", scorer_opts.spec, "ext:<command> | ext:<host:port>")->required();
    conformance_cmd->add_option("--requests", requests, "number of requests")->capture_default_str();
    conformance_cmd->add_option("--timeout", scorer_opts.timeout_s, "response timeout in seconds");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (CLI::CallForHelp const& e) {
        out << app.help();
        return 0;
    } catch (CLI::CallForAllHelp const& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (CLI::CallForVersion const& e) {
        out << kToolVersion << '\n';
        return 0;
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << "\n\n";
        // Show the help of the deepest subcommand that was recognized.
        CLI::App const* deepest = &app;
        while (true) {
            auto subs = deepest->get_subcommands();
            if (subs.empty()) {
                break;
            }
            deepest = subs.front();
        }
        err << deepest->help();
        return static_cast<int>(ExitCode::kValidation);
    }

    try {
        if (stats_cmd->parsed()) {
            fs::path const out_file = out_path;
            auto const config = common.pipeline();
            RunManifest manifest;
            manifest.command = "stats";
            common.describe(manifest, base_of(out_file), config);
            manifest.add_input("collection", collection_path, base_of(out_file));
            auto const stats = compute_stats_from_file(collection_path, config);
            finish(out_file, stats_to_json(stats, config).dump(1) + "\n", manifest);
            out << "documents: " << stats.num_docs << ", terms: " << stats.doc_freq.size() << '\n';
        } else if (calibrate_cmd->parsed()) {
            fs::path const out_file = out_path;
            auto const base = base_of(out_file);
            auto const config = common.pipeline();
            RunManifest manifest;
            manifest.command = "calibrate";
            common.describe(manifest, base, config);
            manifest.add_input("run", run_path, base);
            manifest.add_input("queries", queries_path, base);
            auto const run = load_run(run_path);
            std::unordered_set<std::string> keep;
            for (auto const& qid : run.query_ids()) {
                for (std::size_t i = 0; i < run.for_query(qid).size() && i < calib.top_k_rescore; ++i) {
                    keep.insert(run.for_query(qid)[i].doc_id);
                }
            }
            auto const queries = load_queries(queries_path);
            auto const collection = load_collection(scorer_opts.collection, keep);
            auto scorer = make_scorer(scorer_opts, config, manifest, base);
            if (scorer_opts.spec != "bm25") {
                manifest.add_input("collection", scorer_opts.collection, base);
            }
            auto const d = calibrate_delta(*scorer, run, collection, queries, calib);
            manifest.parameters["top_k_rescore"] = calib.top_k_rescore;
            manifest.parameters["top_k_diff"] = calib.top_k_diff;
            finish(out_file, delta_to_json(d).dump(2) + "\n", manifest);
            out << "delta = " << format_double(d.delta) << " (" << d.differences << " differences, "
                << d.queries_used << " queries, " << d.queries_skipped << " skipped)\n";
        } else if (build_cmd->parsed()) {
            fs::path const out_file = out_path;
            auto const base = base_of(out_file);
            auto const config = common.pipeline();
            RunManifest manifest;
            common.describe(manifest, base, config);
            std::unique_ptr<Annotator> annotator;
            if (!lemma_file.empty()) {
                annotator = std::make_unique<LemmaFileAnnotator>(lemma_file);
                manifest.add_input("lemmas", lemma_file, base);
            } else {
                annotator = std::make_unique<RuleBasedAnnotator>();
            }
            TestSet test;
            if (mmt_cmd->parsed() || tmt_cmd->parsed()) {
                manifest.add_input("qrels", qrels_path, base);
                manifest.add_input("queries", queries_path, base);
                manifest.add_input("collection", collection_path, base);
                auto const qrels = load_qrels(qrels_path);
                auto const queries = load_queries(queries_path);
                auto const collection = load_collection(collection_path, qrels.doc_ids());
                if (mmt_cmd->parsed()) {
                    manifest.command = "build mmt";
                    MmtSpec spec{parse_characteristic(variable), parse_characteristic(control), {}};
                    for (auto const& t : tolerances) {
                        set_tolerance(spec.tolerances, t);
                    }
                    manifest.parameters["variable"] = to_string(spec.variable);
                    manifest.parameters["control"] = to_string(spec.control);
                    manifest.parameters["tolerances"] = tolerances;
                    test = build_mmt(spec, qrels, collection, queries, config, common.jobs);
                } else {
                    manifest.command = "build tmt";
                    auto const k = parse_manipulation(kind);
                    std::optional<ExpansionMap> expansions;
                    if (!expansion_file.empty()) {
                        expansions = load_expansion_map(expansion_file);
                        manifest.add_input("expansions", expansion_file, base);
                    }
                    TmtOptions options{seed, expansions ? &*expansions : nullptr, annotator.get(), common.jobs};
                    manifest.parameters["kind"] = to_string(k);
                    manifest.parameters["seed"] = seed;
                    test = build_tmt(k, qrels, collection, queries, config, options);
                }
            } else {
                manifest.command = "build dtt";
                manifest.add_input("pairs", pairs_path, base);
                auto const pairs = load_text_pairs(pairs_path);
                DttOptions options{seed, annotator.get()};
                manifest.parameters["task"] = task;
                manifest.parameters["seed"] = seed;
                if (task == "fluency") {
                    test = build_fluency(pairs, config, options);
                } else if (task == "formality") {
                    if (l6_path.empty()) {
                        throw ConfigError("build dtt --task formality needs --l6");
                    }
                    manifest.add_input("l6", l6_path, base);
                    test = build_formality(pairs, load_l6_index(l6_path), config, options);
                } else if (task == "summ" || task == "summarization") {
                    manifest.parameters["rate"] = rate;
                    test = build_summarization(pairs, rate, config, options);
                } else {
                    throw ConfigError("unknown dtt task '" + task + "' (fluency, formality, summ)");
                }
            }
            manifest.parameters["test_id"] = test.id;
            if (test.samples.empty()) {
                err << "warning: test " << test.id << " has no samples\n";
            }
            finish(out_file, serialize_test_set(test), manifest);
            out << test.id << ": " << test.samples.size() << " samples\n";
        } else if (run_cmd->parsed()) {
            fs::path const out_file = out_path;
            auto const base = base_of(out_file);
            auto const config = common.pipeline();
            RunManifest manifest;
            manifest.command = "run";
            common.describe(manifest, base, config);
            manifest.add_input("test", test_path, base);
            if (!delta && delta_file.empty() && calibrate_run.empty()) {
                throw ConfigError("run needs one of --delta, --delta-file or --calibrate");
            }
            auto const test = load_test_set(test_path);
            auto scorer = make_scorer(scorer_opts, config, manifest, base);
            double d = 0.0;
            if (delta) {
                d = *delta;
                manifest.parameters["delta_source"] = "explicit";
            } else if (!delta_file.empty()) {
                json j;
                try {
                    j = json::parse(read_file(delta_file));
                    d = j.at("delta").get<double>();
                    if (j.at("scorer_id").get<std::string>() != scorer->id()) {
                        throw ConfigError("delta file " + delta_file + " was calibrated for scorer " +
                                          j.at("scorer_id").get<std::string>() + ", not " + scorer->id());
                    }
                } catch (json::exception const& e) {
                    throw ParseError(std::string("invalid delta file: ") + e.what(), delta_file);
                }
                manifest.add_input("delta", delta_file, base);
                manifest.parameters["delta_source"] = "file";
            } else {
                if (queries_path.empty() || scorer_opts.collection.empty()) {
                    throw ConfigError("--calibrate needs --queries and --collection");
                }
                manifest.add_input("calibration_run", calibrate_run, base);
                manifest.add_input("queries", queries_path, base);
                if (scorer_opts.spec != "bm25") {
                    manifest.add_input("collection", scorer_opts.collection, base);
                }
                auto const run = load_run(calibrate_run);
                std::unordered_set<std::string> keep;
                for (auto const& qid : run.query_ids()) {
                    for (auto const& e : run.for_query(qid)) {
                        keep.insert(e.doc_id);
                    }
                }
                auto const dc = calibrate_delta(*scorer, run, load_collection(scorer_opts.collection, keep),
                                                load_queries(queries_path));
                d = dc.delta;
                manifest.parameters["delta_source"] = "calibrated";
                manifest.parameters["calibration"] = delta_to_json(dc);
            }
            manifest.parameters["delta"] = d;
            manifest.parameters["test_id"] = test.id;
            auto const records = evaluate(test, *scorer, d, common.jobs);
            finish(out_file, serialize_effects(records), manifest);
            if (!records.empty()) {
                out << test.id << ": n = " << records.size() << ", s = " << format_score(summary_score(records))
                    << '\n';
            } else {
                out << test.id << ": no samples\n";
            }
        } else if (report_cmd->parsed()) {
            if (test_paths.size() != effects_paths.size()) {
                throw ConfigError("report needs one --effects per --test");
            }
            auto const fmt = parse_report_format(format);
            std::vector<TestResult> results;
            RunManifest manifest;
            manifest.command = "report";
            fs::path const out_file = out_path;
            auto const base = base_of(out_file);
            for (std::size_t i = 0; i < test_paths.size(); ++i) {
                auto const test = load_test_set(test_paths[i]);
                auto const effects = load_effects(effects_paths[i]);
                results.push_back(analyze(test, effects));
                if (!out_path.empty()) {
                    manifest.add_input("test", test_paths[i], base);
                    manifest.add_input("effects", effects_paths[i], base);
                }
            }
            auto const m = apply_bonferroni(results, alpha);
            auto const text = render_report(results, fmt, alpha);
            if (out_path.empty()) {
                out << text;
            } else {
                manifest.parameters["alpha"] = alpha;
                manifest.parameters["m"] = m;
                manifest.parameters["format"] = format;
                finish(out_file, text, manifest);
            }
        } else if (verify_cmd->parsed()) {
            bool ok = true;
            for (auto const& m : manifests) {
                auto const result = verify_manifest(m);
                out << m << ": " << (result.ok ? "OK" : "FAILED") << '\n';
                for (auto const& p : result.problems) {
                    out << "  " << p << '\n';
                }
                ok = ok && result.ok;
            }
            exit_override = ok ? 0 : static_cast<int>(ExitCode::kValidation);
        } else if (conformance_cmd->parsed()) {
            if (!scorer_opts.spec.starts_with("ext:")) {
                throw ConfigError("conformance needs --scorer ext:<command or host:port>");
            }
            ExternalScorer::Options eo;
            eo.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(scorer_opts.timeout_s * 1000.0));
            auto scorer = ExternalScorer::open(scorer_opts.spec.substr(4), eo);
            out << "handshake: OK (" << scorer->name() << ")\n";
            std::vector<std::string> texts;
            texts.reserve(requests);
            for (std::size_t i = 0; i < requests; ++i) {
                std::string doc;
                for (std::size_t w = 0; w <= i % 17; ++w) {
                    doc += (w ? " " : "") + std::string("token") + std::to_string((i * 31 + w) % 101);
                }
                texts.push_back(std::move(doc));
            }
            std::vector<std::string> query_texts;
            for (std::size_t i = 0; i < 7; ++i) {
                query_texts.push_back("token" + std::to_string(i * 13) + " token" + std::to_string(i * 17 % 101));
            }
            std::vector<ScoreRequest> batch;
            for (std::size_t i = 0; i < requests; ++i) {
                batch.push_back({query_texts[i % query_texts.size()], texts[i]});
            }
            auto const first = scorer->score_batch(batch);
            out << "id bijection: OK (" << first.size() << " responses)\n";
            auto const second = scorer->score_batch(batch);
            if (first != second) {
                out << "deterministic rescoring: FAILED\n";
                exit_override = static_cast<int>(ExitCode::kScorer);
            } else {
                out << "deterministic rescoring: OK\n";
            }
        }
    } catch (Error const& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (fs::filesystem_error const& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kIo);
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kValidation);
    }
    return exit_override.value_or(0);
}

int dispatch(int argc, char const* const* argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace abnirml
