#pragma once

// Benchmark harness: algorithm registry, cross-product sweeps, min-max
// normalization and ranking, Pareto fronts, and empirical complexity
// estimation from timed runs.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinex/baselines.hpp"
#include "spinex/clusterer.hpp"
#include "spinex/core.hpp"
#include "spinex/datasets.hpp"
#include "spinex/metrics.hpp"

namespace spinex::bench {

inline constexpr double time_floor_seconds = 1e-6;

inline constexpr std::array<const char*, 6> metric_names = {
    "silhouette", "calinski_harabasz", "davies_bouldin",
    "homogeneity", "completeness",     "v_measure"};

struct RunRecord {
    std::string algorithm;
    std::string dataset;
    std::uint64_t seed = 0;
    metrics::MetricsRecord metrics;
    double wall_time = 0.0;
};

struct BenchAlgorithm {
    std::string name;
    std::function<ClusterLabels(const datasets::LabeledDataset&, std::uint64_t)> run;
};

struct BaselineDefaults {
    std::size_t fallback_k = 4;  // when a dataset carries no ground truth
    double dbscan_eps = 0.5;
    std::size_t dbscan_min_samples = 5;
};

namespace detail {

inline std::size_t k_for(const datasets::LabeledDataset& ds, std::size_t fallback_k) {
    if (ds.truth) return static_cast<std::size_t>(ds.truth->n_clusters);
    return std::min(fallback_k, ds.x.n_rows());
}

inline std::array<std::optional<double>, 6> metric_array(const metrics::MetricsRecord& m) {
    return {m.silhouette, m.calinski_harabasz, m.davies_bouldin,
            m.homogeneity, m.completeness,     m.v_measure};
}

}  // namespace detail

/// SPINEX variants mirroring the benchmark's tags plus the three baselines.
inline std::vector<BenchAlgorithm> default_algorithms(const BaselineDefaults& defaults = {}) {
    auto spinex_runner = [](SpinexConfig cfg) {
        return [cfg](const datasets::LabeledDataset& ds, std::uint64_t seed) {
            SpinexConfig run_cfg = cfg;
            run_cfg.rng_seed = seed;
            SpinexClustering model(run_cfg);
            return model.fit_predict(ds.x);
        };
    };

    SpinexConfig base;
    SpinexConfig with_pca = base;
    with_pca.use_pca = true;
    SpinexConfig multi_level = base;
    multi_level.use_multi_level = true;
    SpinexConfig random_sampling = base;
    random_sampling.use_approximation = true;
    random_sampling.approximation_method = ApproximationMethod::random_sampling;
    random_sampling.sample_size = 0.5;
    SpinexConfig pca_approx = base;
    pca_approx.use_approximation = true;
    pca_approx.approximation_method = ApproximationMethod::pca;
    SpinexConfig fixed_k = base;
    fixed_k.n_clusters = 4;

    std::vector<BenchAlgorithm> algorithms;
    algorithms.push_back({"spinex", spinex_runner(base)});
    algorithms.push_back({"spinex_t", spinex_runner(with_pca)});
    algorithms.push_back({"spinex_multi_level", spinex_runner(multi_level)});
    algorithms.push_back({"spinex_rs", spinex_runner(random_sampling)});
    algorithms.push_back({"spinex_pca", spinex_runner(pca_approx)});
    algorithms.push_back({"spinex_no_of_clusters", spinex_runner(fixed_k)});
    algorithms.push_back(
        {"kmeans", [defaults](const datasets::LabeledDataset& ds, std::uint64_t seed) {
             return baselines::kmeans(ds.x, detail::k_for(ds, defaults.fallback_k), seed).labels;
         }});
    algorithms.push_back(
        {"dbscan", [defaults](const datasets::LabeledDataset& ds, std::uint64_t) {
             return baselines::dbscan(ds.x, defaults.dbscan_eps, defaults.dbscan_min_samples);
         }});
    algorithms.push_back(
        {"agglomerative", [defaults](const datasets::LabeledDataset& ds, std::uint64_t) {
             return baselines::agglomerative(ds.x, detail::k_for(ds, defaults.fallback_k));
         }});
    return algorithms;
}

/// Runs the full algorithms x datasets x seeds cross product. A failing run
/// is recorded with all-undefined metrics and never aborts the sweep.
/// Metrics are evaluated at tier 3 against the generator's truth.
inline std::vector<RunRecord> run_benchmark(const std::vector<BenchAlgorithm>& algorithms,
                                            const std::vector<std::string>& dataset_names,
                                            const std::vector<std::uint64_t>& seeds,
                                            DecisionLog* log = nullptr) {
    if (algorithms.empty() || dataset_names.empty() || seeds.empty()) {
        throw std::invalid_argument("run_benchmark: empty algorithms, datasets, or seeds");
    }
    std::vector<RunRecord> records;
    records.reserve(algorithms.size() * dataset_names.size() * seeds.size());
    for (const auto& alg : algorithms) {
        for (const auto& name : dataset_names) {
            for (std::uint64_t seed : seeds) {
                RunRecord rec;
                rec.algorithm = alg.name;
                rec.dataset = name;
                rec.seed = seed;
                const auto start = std::chrono::steady_clock::now();
                try {
                    const datasets::LabeledDataset ds = datasets::make_named(name, seed);
                    const ClusterLabels labels = alg.run(ds, seed);
                    std::optional<std::vector<int>> truth;
                    if (ds.truth) truth = ds.truth->assignments;
                    rec.metrics = metrics::compute_record(ds.x, labels, 3, truth, log,
                                                          alg.name + "/" + name);
                } catch (const std::exception& e) {
                    if (log != nullptr) {
                        log->append("Benchmark run failed for " + alg.name + " on " + name +
                                    " (seed " + std::to_string(seed) + "): " + e.what());
                    }
                }
                const auto stop = std::chrono::steady_clock::now();
                rec.wall_time = std::max(
                    time_floor_seconds, std::chrono::duration<double>(stop - start).count());
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------
struct RankingRow {
    std::string algorithm;
    std::array<std::optional<double>, 6> metric_means;  // normalized, DB inverted
    std::optional<double> mean_across;
    int rank = 0;
};

struct RankingTable {
    std::vector<RankingRow> rows;                  // sorted by rank
    std::array<bool, 6> column_included{};         // columns with >= 1 defined value
};

/// Min-max normalizes each metric across all records (Davies-Bouldin
/// inverted since lower is better; a degenerate range maps to 1.0), averages
/// per (algorithm, dataset) and then per algorithm, and ranks algorithms by
/// the mean across metric columns. Exactly equal means share a dense rank.
inline RankingTable normalize_and_rank(const std::vector<RunRecord>& records,
                                       DecisionLog* log = nullptr) {
    if (records.empty()) throw std::invalid_argument("normalize_and_rank: no records");

    std::array<std::optional<double>, 6> col_min, col_max;
    bool any_defined = false;
    for (const auto& rec : records) {
        const auto vals = detail::metric_array(rec.metrics);
        for (std::size_t m = 0; m < 6; ++m) {
            if (!vals[m]) continue;
            any_defined = true;
            if (!col_min[m] || *vals[m] < *col_min[m]) col_min[m] = *vals[m];
            if (!col_max[m] || *vals[m] > *col_max[m]) col_max[m] = *vals[m];
        }
    }
    if (!any_defined) {
        throw std::invalid_argument("normalize_and_rank: no record has a defined metric");
    }

    auto normalize = [&](std::size_t m, double v) {
        const double lo = *col_min[m];
        const double hi = *col_max[m];
        if (hi == lo) return 1.0;
        const double scaled = (v - lo) / (hi - lo);
        return (m == 2) ? 1.0 - scaled : scaled;  // Davies-Bouldin inverted
    };

    // group by (algorithm, dataset), preserving first-appearance order
    struct GroupAcc {
        std::array<double, 6> sum{};
        std::array<std::size_t, 6> count{};
    };
    std::vector<std::string> algorithm_order;
    std::map<std::pair<std::string, std::string>, GroupAcc> groups;
    for (const auto& rec : records) {
        if (std::find(algorithm_order.begin(), algorithm_order.end(), rec.algorithm) ==
            algorithm_order.end()) {
            algorithm_order.push_back(rec.algorithm);
        }
        auto& acc = groups[{rec.algorithm, rec.dataset}];
        const auto vals = detail::metric_array(rec.metrics);
        for (std::size_t m = 0; m < 6; ++m) {
            if (!vals[m]) continue;
            acc.sum[m] += normalize(m, *vals[m]);
            ++acc.count[m];
        }
    }

    // aggregate (algorithm, dataset) means per algorithm
    struct AlgAcc {
        std::array<double, 6> sum{};
        std::array<std::size_t, 6> count{};
    };
    std::map<std::string, AlgAcc> by_alg;
    for (const auto& [key, acc] : groups) {
        auto& alg = by_alg[key.first];
        for (std::size_t m = 0; m < 6; ++m) {
            if (acc.count[m] == 0) continue;
            alg.sum[m] += acc.sum[m] / static_cast<double>(acc.count[m]);
            ++alg.count[m];
        }
    }

    RankingTable table;
    for (std::size_t m = 0; m < 6; ++m) {
        table.column_included[m] = col_min[m].has_value();
        if (!table.column_included[m] && log != nullptr) {
            log->append(std::string("Metric column ") + metric_names[m] +
                        " has no defined values; excluded from ranking.");
        }
    }

    for (const auto& name : algorithm_order) {
        const AlgAcc& acc = by_alg[name];
        RankingRow row;
        row.algorithm = name;
        double total = 0.0;
        std::size_t defined = 0;
        for (std::size_t m = 0; m < 6; ++m) {
            if (acc.count[m] > 0) {
                row.metric_means[m] = acc.sum[m] / static_cast<double>(acc.count[m]);
                total += *row.metric_means[m];
                ++defined;
            }
        }
        if (defined > 0) row.mean_across = total / static_cast<double>(defined);
        table.rows.push_back(std::move(row));
    }

    // order: defined means descending, undefined last; stable within ties
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const RankingRow& a, const RankingRow& b) {
                         if (a.mean_across.has_value() != b.mean_across.has_value()) {
                             return a.mean_across.has_value();
                         }
                         if (!a.mean_across) return false;
                         return *a.mean_across > *b.mean_across;
                     });
    int rank = 0;
    std::optional<double> last;
    bool last_defined_set = false;
    for (auto& row : table.rows) {
        if (!last_defined_set || row.mean_across != last) {
            ++rank;
            last = row.mean_across;
            last_defined_set = true;
        }
        row.rank = rank;
    }
    return table;
}

/// Non-dominated subset of orientation-adjusted score vectors: an algorithm
/// stays unless another is at least as good everywhere and strictly better
/// somewhere. Returns names in input order.
inline std::vector<std::string> pareto_front(
    const std::vector<std::pair<std::string, std::vector<double>>>& scores) {
    std::vector<std::string> front;
    for (std::size_t a = 0; a < scores.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < scores.size() && !dominated; ++b) {
            if (a == b) continue;
            if (scores[b].second.size() != scores[a].second.size()) {
                throw std::invalid_argument("pareto_front: inconsistent metric vector sizes");
            }
            bool all_geq = true;
            bool some_gt = false;
            for (std::size_t m = 0; m < scores[a].second.size(); ++m) {
                if (scores[b].second[m] < scores[a].second[m]) {
                    all_geq = false;
                    break;
                }
                if (scores[b].second[m] > scores[a].second[m]) some_gt = true;
            }
            dominated = all_geq && some_gt;
        }
        if (!dominated) front.push_back(scores[a].first);
    }
    return front;
}

/// Ranking rows -> Pareto input; undefined metric means count as 0 so the
/// comparison stays total.
inline std::vector<std::pair<std::string, std::vector<double>>> pareto_input_from(
    const RankingTable& table) {
    std::vector<std::pair<std::string, std::vector<double>>> scores;
    scores.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> vec;
        for (std::size_t m = 0; m < 6; ++m) {
            if (!table.column_included[m]) continue;
            vec.push_back(row.metric_means[m].value_or(0.0));
        }
        scores.emplace_back(row.algorithm, std::move(vec));
    }
    return scores;
}

// ---------------------------------------------------------------------------
// Complexity estimation
// ---------------------------------------------------------------------------
struct TimingSample {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> times;  // seconds, each >= the 1 microsecond floor

    double median() const {
        std::vector<double> sorted = times;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size();
        if (m % 2 == 1) return sorted[m / 2];
        return (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0;
    }
};

/// Times `fit` on a seeded 4-center blob dataset of shape (n, d). Each trial
/// duration is clamped to the 1 microsecond floor.
inline TimingSample measure_execution_time(
    const std::function<void(const DataMatrix&)>& fit, std::size_t n, std::size_t d,
    std::size_t trials = 30, std::uint64_t seed = 0) {
    if (trials < 1) throw std::invalid_argument("measure_execution_time: need >= 1 trial");
    const datasets::LabeledDataset ds =
        datasets::make_blobs(n, d, 4, 1.0, seed, {-10.0, 10.0}, "timing_blobs");
    TimingSample sample;
    sample.n = n;
    sample.d = d;
    sample.times.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto start = std::chrono::steady_clock::now();
        fit(ds.x);
        const auto stop = std::chrono::steady_clock::now();
        sample.times.push_back(std::max(
            time_floor_seconds, std::chrono::duration<double>(stop - start).count()));
    }
    return sample;
}

inline std::string classify_slope(double s) {
    if (s <= 0.1) return "O(1)";
    if (s <= 0.5) return "O(log n)";
    if (s <= 1.2) return "O(n)";
    if (s <= 1.5) return "O(n log n)";
    if (s <= 2.2) return "O(n^2)";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "O(n^%.2f)", s);
    return buf;
}

/// Least-squares slope of log(time) against log(n), with the documented
/// complexity-class bins.
inline std::pair<double, std::string> estimate_complexity(const std::vector<std::size_t>& sizes,
                                                          const std::vector<double>& times) {
    if (sizes.size() < 3) throw std::invalid_argument("estimate_complexity: need >= 3 sizes");
    if (sizes.size() != times.size()) {
        throw std::invalid_argument("estimate_complexity: sizes and times differ in length");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw std::invalid_argument("estimate_complexity: sizes must be positive");
        if (!(times[i] > 0.0)) {
            throw std::invalid_argument("estimate_complexity: times must be positive");
        }
    }
    const std::size_t m = sizes.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        lx[i] = std::log(static_cast<double>(sizes[i]));
        ly[i] = std::log(times[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("estimate_complexity: sizes must not all be equal");
    const double slope = num / den;
    return {slope, classify_slope(slope)};
}

struct ComplexityAlgorithm {
    std::string name;
    std::function<void(const DataMatrix&)> fit;
};

struct ComplexitySeries {
    std::string algorithm;
    std::size_t d = 0;
    double slope = 0.0;
    std::string complexity_class;
    std::vector<std::pair<std::size_t, double>> medians;  // (n, median seconds)
};

struct ComplexityReport {
    std::vector<TimingSample> cells;  // every timed (algorithm implicit via series) sample
    std::vector<ComplexitySeries> series;
    std::map<std::string, std::pair<double, std::string>> aggregate;  // mean slope + class
};

/// Sweeps the (n, d) grid for each algorithm, fits one slope per feature
/// count, and aggregates per-algorithm mean slopes. Cell failures are logged
/// and skip only the affected series.
inline ComplexityReport run_complexity_analysis(
    const std::vector<ComplexityAlgorithm>& algorithms, const std::vector<std::size_t>& ns,
    const std::vector<std::size_t>& ds, std::size_t trials = 30, std::uint64_t seed = 0,
    DecisionLog* log = nullptr) {
    if (algorithms.empty()) throw std::invalid_argument("run_complexity_analysis: no algorithms");
    if (ns.size() < 3) throw std::invalid_argument("run_complexity_analysis: need >= 3 sizes");
    if (ds.empty()) throw std::invalid_argument("run_complexity_analysis: no feature counts");

    ComplexityReport report;
    for (const auto& alg : algorithms) {
        std::vector<double> slopes;
        for (std::size_t d : ds) {
            std::vector<std::size_t> sizes;
            std::vector<double> medians;
            bool failed = false;
            ComplexitySeries series;
            series.algorithm = alg.name;
            series.d = d;
            for (std::size_t n : ns) {
                try {
                    TimingSample sample = measure_execution_time(alg.fit, n, d, trials, seed);
                    const double med = sample.median();
                    sizes.push_back(n);
                    medians.push_back(med);
                    series.medians.emplace_back(n, med);
                    report.cells.push_back(std::move(sample));
                } catch (const std::exception& e) {
                    failed = true;
                    if (log != nullptr) {
                        log->append("Complexity cell failed for " + alg.name + " (n=" +
                                    std::to_string(n) + ", d=" + std::to_string(d) +
                                    "): " + e.what());
                    }
                }
            }
            if (failed || sizes.size() < 3) {
                if (log != nullptr) {
                    log->append("Skipping complexity series for " + alg.name + " at d=" +
                                std::to_string(d) + " (insufficient successful cells).");
                }
                continue;
            }
            const auto [slope, klass] = estimate_complexity(sizes, medians);
            series.slope = slope;
            series.complexity_class = klass;
            slopes.push_back(slope);
            report.series.push_back(std::move(series));
        }
        if (!slopes.empty()) {
            double mean = 0.0;
            for (double s : slopes) mean += s;
            mean /= static_cast<double>(slopes.size());
            report.aggregate[alg.name] = {mean, classify_slope(mean)};
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// CSV emission. All tables share the loader's dialect; doubles use the
// shortest round-trip form so repeated runs are byte-identical.
// ---------------------------------------------------------------------------
namespace detail {

inline std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

}  // namespace detail

inline void write_runs_csv(const std::vector<RunRecord>& records, const std::string& path) {
    auto out = detail::open_out(path);
    out << "algorithm,dataset,seed,n_clusters";
    for (const char* name : metric_names) out << ',' << name;
    out << '\n';
    for (const auto& rec : records) {
        out << rec.algorithm << ',' << rec.dataset << ',' << rec.seed << ','
            << rec.metrics.n_clusters;
        for (const auto& v : detail::metric_array(rec.metrics)) out << ',' << detail::cell(v);
        out << '\n';
    }
}

inline void write_ranking_csv(const RankingTable& table, const std::string& path) {
    auto out = detail::open_out(path);
    out << "algorithm";
    for (const char* name : metric_names) out << ',' << name;
    out << ",mean_across_metrics,rank\n";
    for (const auto& row : table.rows) {
        out << row.algorithm;
        for (const auto& v : row.metric_means) out << ',' << detail::cell(v);
        out << ',' << detail::cell(row.mean_across) << ',' << row.rank << '\n';
    }
}

inline void write_pareto_csv(const RankingTable& table, const std::vector<std::string>& front,
                             const std::string& path) {
    auto out = detail::open_out(path);
    out << "algorithm,pareto_optimal\n";
    for (const auto& row : table.rows) {
        const bool optimal = std::find(front.begin(), front.end(), row.algorithm) != front.end();
        out << row.algorithm << ',' << (optimal ? "true" : "false") << '\n';
    }
}

inline void write_complexity_csv(const ComplexityReport& report, const std::string& path) {
    auto out = detail::open_out(path);
    out << "algorithm,d,slope,class\n";
    for (const auto& series : report.series) {
        out << series.algorithm << ',' << series.d << ',' << format_double(series.slope) << ','
            << series.complexity_class << '\n';
    }
}

/// One two-column (n, median seconds) file per (algorithm, d) series for
/// external plotting.
inline void write_timing_series(const ComplexityReport& report, const std::string& dir) {
    for (const auto& series : report.series) {
        std::string name = series.algorithm;
        std::replace(name.begin(), name.end(), '.', '_');
        auto out = detail::open_out(dir + "/timing_" + name + "_d" + std::to_string(series.d) +
                                    ".csv");
        out << "n,median_seconds\n";
        for (const auto& [n, med] : series.medians) {
            out << n << ',' << format_double(med) << '\n';
        }
    }
}

}  // namespace spinex::bench
