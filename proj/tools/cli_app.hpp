#pragma once

// Command-line application: generate | cluster | benchmark | explain |
// complexity. Kept in a header so the test suite can drive the commands
// in-process.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinex/spinex.hpp"
#include "spinex/json_report.hpp"

namespace spinex::cli {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_internal = 1;
constexpr int exit_usage = 2;

// ---------------------------------------------------------------------------
// Config file handling
// ---------------------------------------------------------------------------
struct BenchSettings {
    std::vector<std::string> datasets = {"Blobs",   "Varied Density",    "Moons",
                                         "Circles", "Sine Wave Clusters", "Disjoint Clusters"};
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::vector<std::string> algorithms;  // empty = full registry
};

struct ComplexitySettings {
    std::vector<std::size_t> ns = {100, 400, 1600};
    std::vector<std::size_t> ds = {8, 32};
    std::size_t trials = 30;
    std::uint64_t seed = 0;
    std::vector<std::string> algorithms = {"spinex", "kmeans"};
};

struct CliConfig {
    SpinexConfig spinex;
    bench::BaselineDefaults baselines;
    BenchSettings bench;
    ComplexitySettings complexity;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& scope) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw std::invalid_argument("config: unknown key '" + key + "' in " + scope);
        }
    }
}

inline PcaTarget parse_pca_target(const json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return PcaTarget::components(v.get<std::size_t>());
    }
    if (v.is_number_float()) return PcaTarget::variance(v.get<double>());
    throw std::invalid_argument("config: n_components must be an integer count or a fraction");
}

inline std::vector<SimilarityMethod> parse_methods(const json& v) {
    std::vector<SimilarityMethod> methods;
    for (const auto& name : v) {
        methods.push_back(similarity_method_from_string(name.get<std::string>()));
    }
    if (methods.empty()) throw std::invalid_argument("config: similarity_methods is empty");
    return methods;
}

inline SpinexConfig parse_spinex(const json& obj) {
    reject_unknown(obj,
                   {"threshold", "n_clusters", "use_pca", "n_components", "similarity_methods",
                    "evaluation_tier", "use_approximation", "approximation_method", "sample_size",
                    "use_parallel", "parallel_threshold", "max_workers", "use_multi_level",
                    "multi_level", "max_features", "enable_similarity_analysis",
                    "enable_neighbor_analysis", "rng_seed"},
                   "spinex");
    SpinexConfig cfg;
    if (obj.contains("threshold")) {
        const auto& t = obj["threshold"];
        cfg.threshold = t.is_string() ? ThresholdSpec::parse(t.get<std::string>())
                                      : ThresholdSpec::fixed(t.get<double>());
    }
    if (obj.contains("n_clusters") && !obj["n_clusters"].is_null()) {
        cfg.n_clusters = obj["n_clusters"].get<std::size_t>();
    }
    if (obj.contains("use_pca")) cfg.use_pca = obj["use_pca"].get<bool>();
    if (obj.contains("n_components") && !obj["n_components"].is_null()) {
        cfg.n_components = parse_pca_target(obj["n_components"]);
    }
    if (obj.contains("similarity_methods")) {
        cfg.similarity_methods = parse_methods(obj["similarity_methods"]);
    }
    if (obj.contains("evaluation_tier")) cfg.evaluation_tier = obj["evaluation_tier"].get<int>();
    if (obj.contains("use_approximation")) {
        cfg.use_approximation = obj["use_approximation"].get<bool>();
    }
    if (obj.contains("approximation_method")) {
        cfg.approximation_method =
            approximation_method_from_string(obj["approximation_method"].get<std::string>());
    }
    if (obj.contains("sample_size")) cfg.sample_size = obj["sample_size"].get<double>();
    if (obj.contains("use_parallel")) cfg.use_parallel = obj["use_parallel"].get<bool>();
    if (obj.contains("parallel_threshold")) {
        cfg.parallel_threshold = obj["parallel_threshold"].get<std::size_t>();
    }
    if (obj.contains("max_workers") && !obj["max_workers"].is_null()) {
        cfg.max_workers = obj["max_workers"].get<unsigned>();
    }
    if (obj.contains("use_multi_level")) cfg.use_multi_level = obj["use_multi_level"].get<bool>();
    if (obj.contains("multi_level")) {
        const auto& ml = obj["multi_level"];
        reject_unknown(ml, {"levels", "initial_threshold"}, "spinex.multi_level");
        if (ml.contains("levels")) cfg.multi_level_params.levels = ml["levels"].get<int>();
        if (ml.contains("initial_threshold")) {
            cfg.multi_level_params.initial_threshold = ml["initial_threshold"].get<double>();
        }
    }
    if (obj.contains("max_features")) cfg.max_features = obj["max_features"].get<std::size_t>();
    if (obj.contains("enable_similarity_analysis")) {
        cfg.enable_similarity_analysis = obj["enable_similarity_analysis"].get<bool>();
    }
    if (obj.contains("enable_neighbor_analysis")) {
        cfg.enable_neighbor_analysis = obj["enable_neighbor_analysis"].get<bool>();
    }
    if (obj.contains("rng_seed")) cfg.rng_seed = obj["rng_seed"].get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

inline CliConfig parse_config(const json& doc) {
    reject_unknown(doc, {"spinex", "baselines", "bench", "complexity"}, "config root");
    CliConfig cfg;
    if (doc.contains("spinex")) cfg.spinex = parse_spinex(doc["spinex"]);
    if (doc.contains("baselines")) {
        const auto& b = doc["baselines"];
        reject_unknown(b, {"fallback_k", "dbscan_eps", "dbscan_min_samples"}, "baselines");
        if (b.contains("fallback_k")) cfg.baselines.fallback_k = b["fallback_k"].get<std::size_t>();
        if (b.contains("dbscan_eps")) cfg.baselines.dbscan_eps = b["dbscan_eps"].get<double>();
        if (b.contains("dbscan_min_samples")) {
            cfg.baselines.dbscan_min_samples = b["dbscan_min_samples"].get<std::size_t>();
        }
    }
    if (doc.contains("bench")) {
        const auto& b = doc["bench"];
        reject_unknown(b, {"datasets", "seeds", "algorithms"}, "bench");
        if (b.contains("datasets")) {
            cfg.bench.datasets = b["datasets"].get<std::vector<std::string>>();
        }
        if (b.contains("seeds")) cfg.bench.seeds = b["seeds"].get<std::vector<std::uint64_t>>();
        if (b.contains("algorithms")) {
            cfg.bench.algorithms = b["algorithms"].get<std::vector<std::string>>();
        }
    }
    if (doc.contains("complexity")) {
        const auto& c = doc["complexity"];
        reject_unknown(c, {"ns", "ds", "trials", "seed", "algorithms"}, "complexity");
        if (c.contains("ns")) cfg.complexity.ns = c["ns"].get<std::vector<std::size_t>>();
        if (c.contains("ds")) cfg.complexity.ds = c["ds"].get<std::vector<std::size_t>>();
        if (c.contains("trials")) cfg.complexity.trials = c["trials"].get<std::size_t>();
        if (c.contains("seed")) cfg.complexity.seed = c["seed"].get<std::uint64_t>();
        if (c.contains("algorithms")) {
            cfg.complexity.algorithms = c["algorithms"].get<std::vector<std::string>>();
        }
    }
    return cfg;
}

inline CliConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

inline std::vector<bench::BenchAlgorithm> select_algorithms(
    const bench::BaselineDefaults& defaults, const std::vector<std::string>& names) {
    auto registry = bench::default_algorithms(defaults);
    if (names.empty()) return registry;
    std::vector<bench::BenchAlgorithm> selected;
    for (const auto& name : names) {
        const auto it = std::find_if(registry.begin(), registry.end(),
                                     [&](const auto& alg) { return alg.name == name; });
        if (it == registry.end()) {
            throw std::invalid_argument("unknown benchmark algorithm: " + name);
        }
        selected.push_back(*it);
    }
    return selected;
}

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline void print_metrics(std::ostream& out, const metrics::MetricsRecord& rec) {
    auto line = [&](const char* name, const std::optional<double>& v) {
        out << "  " << name << ": " << (v ? format_double(*v) : "undefined") << '\n';
    };
    out << "n_clusters: " << rec.n_clusters << '\n';
    line("silhouette", rec.silhouette);
    line("calinski_harabasz", rec.calinski_harabasz);
    line("davies_bouldin", rec.davies_bouldin);
    line("homogeneity", rec.homogeneity);
    line("completeness", rec.completeness);
    line("v_measure", rec.v_measure);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------
inline int cmd_generate(const std::string& name, std::uint64_t seed, const std::string& out_path,
                        std::ostream& out) {
    const datasets::LabeledDataset ds = datasets::make_named(name, seed);
    datasets::save_csv(ds, out_path);
    out << "dataset: " << ds.name << '\n';
    out << "n: " << ds.x.n_rows() << '\n';
    out << "d: " << ds.x.n_cols() << '\n';
    out << "k: " << (ds.truth ? std::to_string(ds.truth->n_clusters) : std::string("none"))
        << '\n';
    out << "wrote " << out_path << '\n';
    return exit_ok;
}

struct ClusterOptions {
    std::string in_path;
    std::optional<std::string> label_column;
    std::optional<std::string> out_path;
    bool standardize = false;
    bool dump_log = false;
};

inline int cmd_cluster(const ClusterOptions& opts, const SpinexConfig& cfg, std::ostream& out) {
    const datasets::LabeledDataset ds =
        datasets::load_csv(opts.in_path, opts.label_column, opts.standardize);

    SpinexConfig run_cfg = cfg;
    if (ds.truth && !run_cfg.ground_truth) run_cfg.ground_truth = ds.truth->assignments;
    SpinexClustering model(run_cfg);
    const ClusterLabels labels = model.fit_predict(ds.x);

    if (opts.out_path) {
        std::ofstream file(*opts.out_path);
        if (!file) throw std::invalid_argument("cannot open file for writing: " + *opts.out_path);
        file << "row_index,label\n";
        for (std::size_t i = 0; i < labels.assignments.size(); ++i) {
            file << i << ',' << labels.assignments[i] << '\n';
        }
    }

    out << "method: " << (model.best_method() ? to_string(*model.best_method()) : "none") << '\n';
    std::optional<std::vector<int>> truth;
    if (ds.truth) truth = ds.truth->assignments;
    const metrics::MetricsRecord rec =
        metrics::compute_record(ds.x, labels, truth ? 3 : 1, truth);
    detail::print_metrics(out, rec);
    if (opts.out_path) out << "wrote " << *opts.out_path << '\n';
    if (opts.dump_log) {
        out << "decision log:\n";
        for (const auto& message : model.decision_log().messages()) {
            out << "  " << message << '\n';
        }
    }
    return exit_ok;
}

inline int cmd_benchmark(const CliConfig& cfg, const std::vector<std::string>& algorithm_override,
                         const std::string& out_dir, std::ostream& out,
                         std::ostream* log_stream = nullptr) {
    const auto& names = algorithm_override.empty() ? cfg.bench.algorithms : algorithm_override;
    const auto algorithms = detail::select_algorithms(cfg.baselines, names);
    DecisionLog log;
    const auto records = bench::run_benchmark(algorithms, cfg.bench.datasets, cfg.bench.seeds, &log);
    const auto table = bench::normalize_and_rank(records, &log);
    const auto front = bench::pareto_front(bench::pareto_input_from(table));
    if (log_stream) {
        for (const auto& message : log.messages()) *log_stream << message << '\n';
    }

    std::filesystem::create_directories(out_dir);
    bench::write_runs_csv(records, out_dir + "/runs.csv");
    bench::write_ranking_csv(table, out_dir + "/ranking.csv");
    bench::write_pareto_csv(table, front, out_dir + "/pareto.csv");
    jsonio::write_report_json(records, table, front, bench::ComplexityReport{}, log,
                              out_dir + "/report.json");

    out << "runs: " << records.size() << '\n';
    out << "ranking:\n";
    for (const auto& row : table.rows) {
        out << "  " << row.rank << ". " << row.algorithm << " ("
            << (row.mean_across ? format_double(*row.mean_across) : "undefined") << ")\n";
    }
    out << "pareto front:";
    for (const auto& name : front) out << ' ' << name;
    out << '\n';
    out << "wrote " << out_dir << "/runs.csv, ranking.csv, pareto.csv, report.json\n";
    return exit_ok;
}

struct ExplainOptions {
    std::string in_path;
    std::optional<std::string> label_column;
    std::size_t observation = 0;
    std::size_t k = 5;
    std::vector<SimilarityMethod> methods = all_similarity_methods();
    std::optional<std::string> out_path;
};

inline int cmd_explain(const ExplainOptions& opts, std::ostream& out) {
    const datasets::LabeledDataset ds = datasets::load_csv(opts.in_path, opts.label_column);
    const std::size_t n = ds.x.n_rows();
    if (opts.observation >= n) {
        throw std::invalid_argument("observation index out of range: " +
                                    std::to_string(opts.observation));
    }
    if (opts.k >= n) {
        throw std::invalid_argument("k must be smaller than the observation count");
    }

    SimilarityCache cache;
    DecisionLog log;
    json report;
    report["observation"] = opts.observation;
    report["k"] = opts.k;

    const explain::SimilarityAnalysis contrib =
        explain::similarity_contribution(ds.x, opts.observation);
    report["similarity_analysis"] = jsonio::similarity_analysis_to_json(contrib);

    json methods = json::object();
    for (SimilarityMethod method : opts.methods) {
        const explain::NeighborAnalysis na =
            explain::nearest_neighbors(ds.x, opts.observation, opts.k, method, cache, log);
        methods[to_string(method)] = jsonio::neighbor_analysis_to_json(na);
        out << to_string(method) << " neighbors:";
        for (std::size_t idx : na.neighbor_indices) out << ' ' << idx;
        out << '\n';
    }
    report["methods"] = std::move(methods);

    if (opts.out_path) {
        std::ofstream file(*opts.out_path);
        if (!file) throw std::invalid_argument("cannot open file for writing: " + *opts.out_path);
        file << report.dump(2) << '\n';
        out << "wrote " << *opts.out_path << '\n';
    }
    return exit_ok;
}

inline int cmd_complexity(const CliConfig& cfg, const std::vector<std::string>& algorithm_override,
                          const std::string& out_dir, std::ostream& out,
                          std::ostream* log_stream = nullptr) {
    const auto& names =
        algorithm_override.empty() ? cfg.complexity.algorithms : algorithm_override;
    if (names.empty()) throw std::invalid_argument("complexity: empty algorithm list");
    const auto registry = detail::select_algorithms(cfg.baselines, names);

    std::vector<bench::ComplexityAlgorithm> algorithms;
    for (const auto& alg : registry) {
        algorithms.push_back({alg.name, [run = alg.run](const DataMatrix& x) {
                                  datasets::LabeledDataset ds{"timing_blobs", x, std::nullopt, 0, {}};
                                  run(ds, 0);
                              }});
    }

    DecisionLog log;
    const auto report = bench::run_complexity_analysis(algorithms, cfg.complexity.ns,
                                                       cfg.complexity.ds, cfg.complexity.trials,
                                                       cfg.complexity.seed, &log);
    std::filesystem::create_directories(out_dir);
    bench::write_complexity_csv(report, out_dir + "/complexity.csv");
    bench::write_timing_series(report, out_dir);
    if (log_stream) {
        for (const auto& message : log.messages()) *log_stream << message << '\n';
    }

    for (const auto& series : report.series) {
        out << series.algorithm << " d=" << series.d << " slope=" << format_double(series.slope)
            << " class=" << series.complexity_class << '\n';
    }
    for (const auto& [name, agg] : report.aggregate) {
        out << name << " aggregate slope=" << format_double(agg.first) << " class=" << agg.second
            << '\n';
    }
    out << "wrote " << out_dir << "/complexity.csv and timing series\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// Argument parsing and dispatch
// ---------------------------------------------------------------------------
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spinex similarity-based clustering toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string log_level = "info";
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out-dir", out_dir, "output directory for generated files");
    auto* seed_opt = app.add_option("--seed", seed, "global seed");
    app.add_option("--log-level", log_level, "stderr verbosity: quiet|info|debug")
        ->check(CLI::IsMember({"quiet", "info", "debug"}));

    auto* generate = app.add_subcommand("generate", "write a named synthetic dataset as CSV");
    generate->fallthrough();
    std::string gen_name;
    std::string gen_out = "dataset.csv";
    generate->add_option("--name", gen_name, "dataset name from the registry")->required();
    generate->add_option("--out", gen_out, "output CSV path");

    auto* cluster = app.add_subcommand("cluster", "cluster a CSV file");
    cluster->fallthrough();
    ClusterOptions cluster_opts;
    std::string cluster_label;
    std::string cluster_out;
    std::string threshold_text;
    std::string methods_text;
    std::string components_text;
    std::optional<std::size_t> n_clusters_flag;
    std::optional<int> tier_flag;
    std::optional<int> levels_flag;
    std::optional<double> initial_threshold_flag;
    std::optional<std::size_t> max_features_flag;
    bool use_pca_flag = false;
    bool multi_level_flag = false;
    bool parallel_flag = false;
    cluster->add_option("--in", cluster_opts.in_path, "input CSV")->required();
    cluster->add_option("--label-column", cluster_label, "ground-truth column name");
    cluster->add_option("--out", cluster_out, "labels CSV path");
    cluster->add_option("--n-clusters", n_clusters_flag, "fixed cluster count");
    cluster->add_option("--threshold", threshold_text, "auto, <p>% or a fixed value");
    cluster->add_option("--methods", methods_text,
                        "comma list of correlation,spearman,kernel,cosine");
    cluster->add_option("--tier", tier_flag, "evaluation tier 1..3");
    cluster->add_flag("--use-pca", use_pca_flag, "standardize and project with PCA");
    cluster->add_option("--n-components", components_text, "PCA component count or fraction");
    cluster->add_flag("--multi-level", multi_level_flag, "enable multi-level clustering");
    cluster->add_option("--levels", levels_flag, "multi-level depth");
    cluster->add_option("--initial-threshold", initial_threshold_flag,
                        "multi-level starting threshold");
    cluster->add_option("--max-features", max_features_flag, "feature cap before clustering");
    cluster->add_flag("--parallel", parallel_flag, "allow parallel method execution");
    cluster->add_flag("--standardize", cluster_opts.standardize, "standardize features on load");
    cluster->add_flag("--log", cluster_opts.dump_log, "print the decision log");

    auto* benchmark = app.add_subcommand("benchmark", "run the benchmark sweep");
    benchmark->fallthrough();
    std::string bench_algorithms;
    benchmark->add_option("--algorithms", bench_algorithms, "comma list of registry names");

    auto* explain_cmd = app.add_subcommand("explain", "explain one observation of a CSV");
    explain_cmd->fallthrough();
    ExplainOptions explain_opts;
    std::string explain_label;
    std::string explain_methods;
    std::string explain_out;
    explain_cmd->add_option("--in", explain_opts.in_path, "input CSV")->required();
    explain_cmd->add_option("--label-column", explain_label, "ground-truth column name");
    explain_cmd->add_option("--observation", explain_opts.observation, "observation index");
    explain_cmd->add_option("--k", explain_opts.k, "neighbor count");
    explain_cmd->add_option("--methods,--method", explain_methods,
                            "comma list of similarity methods to report");
    explain_cmd->add_option("--out", explain_out, "JSON report path");

    auto* complexity = app.add_subcommand("complexity", "estimate empirical complexity");
    complexity->fallthrough();
    std::string complexity_algorithms;
    complexity->add_option("--algorithms", complexity_algorithms,
                           "comma list of registry names");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("spinex");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        CliConfig cfg;
        if (!config_path.empty()) cfg = detail::load_config(config_path);
        if (seed_opt->count() > 0) cfg.spinex.rng_seed = seed;
        const bool debug = log_level == "debug";
        std::ostream* log_stream = debug ? &err : nullptr;

        if (generate->parsed()) {
            return cmd_generate(gen_name, seed, gen_out, out);
        }
        if (cluster->parsed()) {
            if (!cluster_label.empty()) cluster_opts.label_column = cluster_label;
            if (!cluster_out.empty()) cluster_opts.out_path = cluster_out;
            if (debug) cluster_opts.dump_log = true;
            SpinexConfig run_cfg = cfg.spinex;
            if (n_clusters_flag) run_cfg.n_clusters = *n_clusters_flag;
            if (!threshold_text.empty()) run_cfg.threshold = ThresholdSpec::parse(threshold_text);
            if (!methods_text.empty()) {
                std::vector<SimilarityMethod> methods;
                for (const auto& name : detail::split_list(methods_text)) {
                    methods.push_back(similarity_method_from_string(name));
                }
                run_cfg.similarity_methods = std::move(methods);
            }
            if (tier_flag) run_cfg.evaluation_tier = *tier_flag;
            if (use_pca_flag) run_cfg.use_pca = true;
            if (!components_text.empty()) {
                run_cfg.n_components = detail::parse_pca_target(json::parse(components_text));
            }
            if (multi_level_flag) run_cfg.use_multi_level = true;
            if (levels_flag) run_cfg.multi_level_params.levels = *levels_flag;
            if (initial_threshold_flag) {
                run_cfg.multi_level_params.initial_threshold = *initial_threshold_flag;
            }
            if (max_features_flag) run_cfg.max_features = *max_features_flag;
            if (parallel_flag) run_cfg.use_parallel = true;
            run_cfg.validate();
            return cmd_cluster(cluster_opts, run_cfg, out);
        }
        if (benchmark->parsed()) {
            return cmd_benchmark(cfg, detail::split_list(bench_algorithms), out_dir, out,
                                 log_stream);
        }
        if (explain_cmd->parsed()) {
            if (!explain_label.empty()) explain_opts.label_column = explain_label;
            if (!explain_out.empty()) explain_opts.out_path = explain_out;
            if (!explain_methods.empty()) {
                std::vector<SimilarityMethod> methods;
                for (const auto& name : detail::split_list(explain_methods)) {
                    methods.push_back(similarity_method_from_string(name));
                }
                explain_opts.methods = std::move(methods);
            }
            return cmd_explain(explain_opts, out);
        }
        if (complexity->parsed()) {
            return cmd_complexity(cfg, detail::split_list(complexity_algorithms), out_dir, out,
                                  log_stream);
        }
        err << "error: no command selected\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NotImplementedError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

}  // namespace spinex::cli
