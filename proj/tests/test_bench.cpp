#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "spinex/bench.hpp"
#include "spinex/core.hpp"
#include "spinex/datasets.hpp"
#include "test_support.hpp"

using spinex::ClusterLabels;
using spinex::DataMatrix;
using spinex::DecisionLog;
using spinex::bench::BenchAlgorithm;
using spinex::bench::RunRecord;
using spinex::metrics::MetricsRecord;
using testsupport::TempDir;

namespace {

// Splits the rows into a leading and a trailing half.
BenchAlgorithm halves_algorithm(const std::string& name = "halves") {
    return {name, [](const spinex::datasets::LabeledDataset& ds, std::uint64_t) {
                std::vector<int> labels(ds.x.n_rows(), 0);
                for (std::size_t i = ds.x.n_rows() / 2; i < ds.x.n_rows(); ++i) labels[i] = 1;
                return spinex::canonicalize_labels(labels);
            }};
}

BenchAlgorithm lump_algorithm() {
    return {"lump", [](const spinex::datasets::LabeledDataset& ds, std::uint64_t) {
                return spinex::canonicalize_labels(std::vector<int>(ds.x.n_rows(), 0));
            }};
}

RunRecord record_of(std::string alg, std::string dataset, std::uint64_t seed,
                    std::optional<double> sil, std::optional<double> db) {
    RunRecord rec;
    rec.algorithm = std::move(alg);
    rec.dataset = std::move(dataset);
    rec.seed = seed;
    rec.metrics.n_clusters = 2;
    rec.metrics.silhouette = sil;
    rec.metrics.davies_bouldin = db;
    return rec;
}

}  // namespace

TEST(RunBenchmark, CoversTheCrossProductInOrder) {
    const std::vector<BenchAlgorithm> algorithms = {halves_algorithm(), lump_algorithm()};
    const std::vector<std::string> names = {"Blobs", "Moons"};
    const std::vector<std::uint64_t> seeds = {1, 2};

    const auto records = spinex::bench::run_benchmark(algorithms, names, seeds);
    ASSERT_EQ(records.size(), 8u);

    std::size_t idx = 0;
    for (const auto& alg : algorithms) {
        for (const auto& name : names) {
            for (std::uint64_t seed : seeds) {
                EXPECT_EQ(records[idx].algorithm, alg.name);
                EXPECT_EQ(records[idx].dataset, name);
                EXPECT_EQ(records[idx].seed, seed);
                EXPECT_GE(records[idx].wall_time, spinex::bench::time_floor_seconds);
                ++idx;
            }
        }
    }

    // The two-cluster split earns a full tier-3 record against the generator
    // truth; the single lump is gated to all-undefined.
    EXPECT_TRUE(records[0].metrics.silhouette.has_value());
    EXPECT_TRUE(records[0].metrics.v_measure.has_value());
    EXPECT_EQ(records[4].metrics.n_clusters, 1);
    EXPECT_FALSE(records[4].metrics.silhouette.has_value());
    EXPECT_FALSE(records[4].metrics.v_measure.has_value());
}

TEST(RunBenchmark, FailuresAreLoggedAndKeptAsUndefinedRecords) {
    const BenchAlgorithm boom{"boom",
                              [](const spinex::datasets::LabeledDataset&, std::uint64_t)
                                  -> ClusterLabels { throw std::runtime_error("nope"); }};
    DecisionLog log;
    const auto records = spinex::bench::run_benchmark({boom}, {"Blobs"}, {1}, &log);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].metrics, MetricsRecord{});
    EXPECT_TRUE(log.contains("Benchmark run failed for boom on Blobs (seed 1): nope"));
}

TEST(RunBenchmark, ValidatesInputs) {
    const std::vector<BenchAlgorithm> algs = {lump_algorithm()};
    EXPECT_THROW(spinex::bench::run_benchmark({}, {"Blobs"}, {1}), std::invalid_argument);
    EXPECT_THROW(spinex::bench::run_benchmark(algs, {}, {1}), std::invalid_argument);
    EXPECT_THROW(spinex::bench::run_benchmark(algs, {"Blobs"}, {}), std::invalid_argument);
}

TEST(RunBenchmark, FallbackClusterCountAppliesOnlyWithoutTruth) {
    const auto with_truth = spinex::datasets::make_named("Moons", 1);
    EXPECT_EQ(spinex::bench::detail::k_for(with_truth, 4), 2u);
    const auto without = spinex::datasets::make_named("No structure", 1);
    EXPECT_EQ(spinex::bench::detail::k_for(without, 4), 4u);
    const auto tiny = spinex::datasets::make_blobs(3, 2, 2, 1.0, 1);
    auto unlabeled = tiny;
    unlabeled.truth.reset();
    EXPECT_EQ(spinex::bench::detail::k_for(unlabeled, 4), 3u);
}

TEST(NormalizeAndRank, HandComputedTwoAlgorithmTable) {
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.2, 2.0));
    records.push_back(record_of("B", "D", 1, 0.8, 0.5));

    DecisionLog log;
    const auto table = spinex::bench::normalize_and_rank(records, &log);
    ASSERT_EQ(table.rows.size(), 2u);

    // Silhouette scales to {0, 1}; Davies-Bouldin scales then inverts.
    EXPECT_EQ(table.rows[0].algorithm, "B");
    EXPECT_EQ(table.rows[0].rank, 1);
    EXPECT_NEAR(*table.rows[0].metric_means[0], 1.0, 1e-12);
    EXPECT_NEAR(*table.rows[0].metric_means[2], 1.0, 1e-12);
    EXPECT_NEAR(*table.rows[0].mean_across, 1.0, 1e-12);
    EXPECT_EQ(table.rows[1].algorithm, "A");
    EXPECT_EQ(table.rows[1].rank, 2);
    EXPECT_NEAR(*table.rows[1].mean_across, 0.0, 1e-12);

    EXPECT_TRUE(table.column_included[0]);
    EXPECT_FALSE(table.column_included[1]);
    EXPECT_TRUE(table.column_included[2]);
    EXPECT_TRUE(log.contains(
        "Metric column calinski_harabasz has no defined values; excluded from ranking."));
    EXPECT_TRUE(log.contains("Metric column v_measure has no defined values; excluded from ranking."));
}

TEST(NormalizeAndRank, DegenerateColumnScoresOneAndTiesShareADenseRank) {
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.5, std::nullopt));
    records.push_back(record_of("B", "D", 1, 0.5, std::nullopt));
    records.push_back(record_of("C", "D", 1, 0.1, std::nullopt));

    const auto table = spinex::bench::normalize_and_rank(records);
    ASSERT_EQ(table.rows.size(), 3u);
    // A and B share the degenerate... no: min 0.1, max 0.5, so A and B hit 1.
    EXPECT_EQ(table.rows[0].algorithm, "A");
    EXPECT_EQ(table.rows[1].algorithm, "B");
    EXPECT_EQ(table.rows[0].rank, 1);
    EXPECT_EQ(table.rows[1].rank, 1);
    EXPECT_EQ(table.rows[2].algorithm, "C");
    EXPECT_EQ(table.rows[2].rank, 2);

    // A truly constant column maps to 1.0 everywhere.
    std::vector<RunRecord> flat;
    flat.push_back(record_of("A", "D", 1, 0.3, std::nullopt));
    flat.push_back(record_of("B", "D", 1, 0.3, std::nullopt));
    const auto flat_table = spinex::bench::normalize_and_rank(flat);
    EXPECT_NEAR(*flat_table.rows[0].metric_means[0], 1.0, 1e-12);
    EXPECT_NEAR(*flat_table.rows[1].metric_means[0], 1.0, 1e-12);
    EXPECT_EQ(flat_table.rows[0].rank, 1);
    EXPECT_EQ(flat_table.rows[1].rank, 1);
}

TEST(NormalizeAndRank, DatasetMeansAreTakenBeforeAlgorithmMeans) {
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D1", 1, 0.0, std::nullopt));
    records.push_back(record_of("A", "D1", 2, 0.4, std::nullopt));
    records.push_back(record_of("A", "D2", 1, 0.8, std::nullopt));
    records.push_back(record_of("B", "D1", 1, 1.0, std::nullopt));

    const auto table = spinex::bench::normalize_and_rank(records);
    const auto& a_row = table.rows[0].algorithm == "A" ? table.rows[0] : table.rows[1];
    // Per-dataset means 0.2 and 0.8 average to 0.5; a flat mean over the
    // three runs would give 0.4.
    EXPECT_NEAR(*a_row.metric_means[0], 0.5, 1e-12);
}

TEST(NormalizeAndRank, UndefinedAlgorithmsSortLastWithSharedRank) {
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.9, std::nullopt));
    RunRecord failed_c;
    failed_c.algorithm = "C";
    failed_c.dataset = "D";
    failed_c.seed = 1;
    RunRecord failed_d = failed_c;
    failed_d.algorithm = "E";
    records.push_back(failed_c);
    records.push_back(failed_d);

    const auto table = spinex::bench::normalize_and_rank(records);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_EQ(table.rows[0].algorithm, "A");
    EXPECT_EQ(table.rows[0].rank, 1);
    EXPECT_FALSE(table.rows[1].mean_across.has_value());
    EXPECT_FALSE(table.rows[2].mean_across.has_value());
    EXPECT_EQ(table.rows[1].rank, 2);
    EXPECT_EQ(table.rows[2].rank, 2);
}

TEST(NormalizeAndRank, RejectsEmptyOrFullyUndefinedInput) {
    EXPECT_THROW(spinex::bench::normalize_and_rank({}), std::invalid_argument);
    RunRecord rec;
    rec.algorithm = "A";
    rec.dataset = "D";
    EXPECT_THROW(spinex::bench::normalize_and_rank({rec}), std::invalid_argument);
}

TEST(ParetoFront, HandCases) {
    const std::vector<std::pair<std::string, std::vector<double>>> scores = {
        {"A", {1.0, 0.0}}, {"B", {0.0, 1.0}}, {"C", {0.5, 0.5}}, {"D", {0.4, 0.4}}};
    EXPECT_EQ(spinex::bench::pareto_front(scores),
              (std::vector<std::string>{"A", "B", "C"}));

    // Exact duplicates never dominate each other.
    const std::vector<std::pair<std::string, std::vector<double>>> twins = {
        {"A", {0.5, 0.5}}, {"B", {0.5, 0.5}}};
    EXPECT_EQ(spinex::bench::pareto_front(twins), (std::vector<std::string>{"A", "B"}));

    const std::vector<std::pair<std::string, std::vector<double>>> ragged = {
        {"A", {0.5, 0.5}}, {"B", {0.5}}};
    EXPECT_THROW(spinex::bench::pareto_front(ragged), std::invalid_argument);
}

TEST(ParetoFront, MatchesDominanceOracleOnRandomTables) {
    spinex::Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_algs = 1 + rng.uniform_index(8);
        const std::size_t m = 1 + rng.uniform_index(4);
        std::vector<std::pair<std::string, std::vector<double>>> scores;
        for (std::size_t a = 0; a < n_algs; ++a) {
            std::vector<double> vec(m);
            // one-decimal grid to provoke ties and exact dominance
            for (double& v : vec) v = std::round(rng.uniform() * 10.0) / 10.0;
            scores.emplace_back("alg" + std::to_string(a), std::move(vec));
        }
        EXPECT_EQ(spinex::bench::pareto_front(scores), oracles::pareto(scores));
    }
}

TEST(ParetoInput, UsesIncludedColumnsWithZeroForUndefined) {
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.2, 2.0));
    RunRecord partial = record_of("B", "D", 1, 0.8, std::nullopt);
    records.push_back(partial);

    const auto table = spinex::bench::normalize_and_rank(records);
    const auto scores = spinex::bench::pareto_input_from(table);
    ASSERT_EQ(scores.size(), 2u);
    // Two included columns (silhouette, davies_bouldin); B's missing DB
    // becomes 0. A single defined DB value is a degenerate column -> 1.0.
    for (const auto& [name, vec] : scores) {
        ASSERT_EQ(vec.size(), 2u);
        if (name == "A") {
            EXPECT_NEAR(vec[0], 0.0, 1e-12);
            EXPECT_NEAR(vec[1], 1.0, 1e-12);
        } else {
            EXPECT_NEAR(vec[0], 1.0, 1e-12);
            EXPECT_NEAR(vec[1], 0.0, 1e-12);
        }
    }
}

TEST(MeasureExecutionTime, AppliesFloorAndShape) {
    const auto sample = spinex::bench::measure_execution_time([](const DataMatrix&) {}, 50, 2, 7, 1);
    EXPECT_EQ(sample.n, 50u);
    EXPECT_EQ(sample.d, 2u);
    ASSERT_EQ(sample.times.size(), 7u);
    for (double t : sample.times) EXPECT_GE(t, spinex::bench::time_floor_seconds);
    EXPECT_GE(sample.median(), spinex::bench::time_floor_seconds);

    EXPECT_THROW(spinex::bench::measure_execution_time([](const DataMatrix&) {}, 50, 2, 0, 1),
                 std::invalid_argument);
}

TEST(EstimateComplexity, RecoversPlantedPowerLaws) {
    const std::vector<std::size_t> sizes = {100, 200, 400, 800, 1600};
    const std::vector<std::pair<double, std::string>> planted = {
        {0.0, "O(1)"}, {0.4, "O(log n)"}, {1.0, "O(n)"}, {1.46, "O(n log n)"},
        {2.0, "O(n^2)"}, {2.7, "O(n^2.70)"}};
    for (const auto& [s, expected_class] : planted) {
        std::vector<double> times;
        for (std::size_t n : sizes) {
            times.push_back(3e-7 * std::pow(static_cast<double>(n), s));
        }
        const auto [slope, klass] = spinex::bench::estimate_complexity(sizes, times);
        EXPECT_NEAR(slope, s, 1e-9);
        EXPECT_EQ(klass, expected_class);
    }
}

TEST(EstimateComplexity, ToleratesMultiplicativeNoise) {
    spinex::Rng rng(77);
    const std::vector<std::size_t> sizes = {100, 200, 400, 800, 1600};
    for (double s : {1.0, 2.0}) {
        std::vector<double> times;
        for (std::size_t n : sizes) {
            const double noise = 1.0 + rng.uniform(-0.1, 0.1);
            times.push_back(1e-6 * std::pow(static_cast<double>(n), s) * noise);
        }
        const auto [slope, klass] = spinex::bench::estimate_complexity(sizes, times);
        EXPECT_NEAR(slope, s, 0.15);
    }
}

TEST(EstimateComplexity, ClassBoundariesAreInclusive) {
    EXPECT_EQ(spinex::bench::classify_slope(0.1), "O(1)");
    EXPECT_EQ(spinex::bench::classify_slope(0.5), "O(log n)");
    EXPECT_EQ(spinex::bench::classify_slope(1.2), "O(n)");
    EXPECT_EQ(spinex::bench::classify_slope(1.5), "O(n log n)");
    EXPECT_EQ(spinex::bench::classify_slope(2.2), "O(n^2)");
    EXPECT_EQ(spinex::bench::classify_slope(2.21), "O(n^2.21)");
}

TEST(EstimateComplexity, ValidatesInput) {
    EXPECT_THROW(spinex::bench::estimate_complexity({100, 200}, {1.0, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::estimate_complexity({100, 200, 400}, {1.0, 2.0}),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::estimate_complexity({100, 200, 0}, {1.0, 2.0, 3.0}),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::estimate_complexity({100, 200, 400}, {1.0, 0.0, 3.0}),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::estimate_complexity({100, 100, 100}, {1.0, 2.0, 3.0}),
                 std::invalid_argument);
}

TEST(RunComplexityAnalysis, QuadraticWorkloadClassifiesQuadratic) {
    const spinex::bench::ComplexityAlgorithm quad{
        "quad", [](const DataMatrix& x) {
            volatile double acc = 0.0;
            const std::size_t n = x.n_rows();
            for (std::size_t i = 0; i < n * n; ++i) {
                acc = acc + std::sqrt(static_cast<double>(i + 1));
            }
        }};
    const auto report = spinex::bench::run_complexity_analysis({quad}, {200, 400, 800, 1600},
                                                               {2}, 5, 1);
    ASSERT_EQ(report.series.size(), 1u);
    EXPECT_EQ(report.series[0].algorithm, "quad");
    EXPECT_EQ(report.series[0].d, 2u);
    EXPECT_GE(report.series[0].slope, 1.7);
    EXPECT_LE(report.series[0].slope, 2.2);
    EXPECT_EQ(report.series[0].complexity_class, "O(n^2)");
    ASSERT_EQ(report.series[0].medians.size(), 4u);
    ASSERT_TRUE(report.aggregate.contains("quad"));
    EXPECT_EQ(report.aggregate.at("quad").second, "O(n^2)");
    EXPECT_EQ(report.cells.size(), 4u);
}

TEST(RunComplexityAnalysis, FailingCellsSkipTheSeries) {
    const spinex::bench::ComplexityAlgorithm flaky{
        "flaky", [](const DataMatrix& x) {
            if (x.n_rows() > 300) throw std::runtime_error("too big");
        }};
    DecisionLog log;
    const auto report =
        spinex::bench::run_complexity_analysis({flaky}, {100, 200, 400}, {2}, 2, 1, &log);
    EXPECT_TRUE(report.series.empty());
    EXPECT_FALSE(report.aggregate.contains("flaky"));
    EXPECT_TRUE(log.contains("Complexity cell failed for flaky (n=400, d=2): too big"));
    EXPECT_TRUE(log.contains("Skipping complexity series for flaky at d=2"));
}

TEST(RunComplexityAnalysis, ValidatesInput) {
    const spinex::bench::ComplexityAlgorithm noop{"noop", [](const DataMatrix&) {}};
    EXPECT_THROW(spinex::bench::run_complexity_analysis({}, {100, 200, 400}, {2}, 1, 1),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::run_complexity_analysis({noop}, {100, 200}, {2}, 1, 1),
                 std::invalid_argument);
    EXPECT_THROW(spinex::bench::run_complexity_analysis({noop}, {100, 200, 400}, {}, 1, 1),
                 std::invalid_argument);
}

TEST(CsvWriters, RunsCsvLayoutAndDeterminism) {
    TempDir dir;
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.25, 2.0));
    RunRecord undefined_rec;
    undefined_rec.algorithm = "B";
    undefined_rec.dataset = "D";
    undefined_rec.seed = 2;
    undefined_rec.wall_time = 0.5;
    records.push_back(undefined_rec);

    const std::string path = dir.file("runs.csv");
    spinex::bench::write_runs_csv(records, path);
    const auto lines = testsupport::read_lines(path);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0],
              "algorithm,dataset,seed,n_clusters,silhouette,calinski_harabasz,davies_bouldin,"
              "homogeneity,completeness,v_measure");
    EXPECT_EQ(lines[1], "A,D,1,2,0.25,,2,,,");
    EXPECT_EQ(lines[2], "B,D,2,0,,,,,,");

    const std::string again = dir.file("runs2.csv");
    spinex::bench::write_runs_csv(records, again);
    EXPECT_EQ(testsupport::read_file(path), testsupport::read_file(again));
}

TEST(CsvWriters, RankingAndParetoLayout) {
    TempDir dir;
    std::vector<RunRecord> records;
    records.push_back(record_of("A", "D", 1, 0.2, 2.0));
    records.push_back(record_of("B", "D", 1, 0.8, 0.5));
    const auto table = spinex::bench::normalize_and_rank(records);
    const auto front = spinex::bench::pareto_front(spinex::bench::pareto_input_from(table));

    const std::string ranking_path = dir.file("ranking.csv");
    spinex::bench::write_ranking_csv(table, ranking_path);
    const auto ranking = testsupport::read_lines(ranking_path);
    ASSERT_EQ(ranking.size(), 3u);
    EXPECT_EQ(ranking[0],
              "algorithm,silhouette,calinski_harabasz,davies_bouldin,homogeneity,completeness,"
              "v_measure,mean_across_metrics,rank");
    EXPECT_EQ(ranking[1], "B,1,,1,,,,1,1");
    EXPECT_EQ(ranking[2], "A,0,,0,,,,0,2");

    const std::string pareto_path = dir.file("pareto.csv");
    spinex::bench::write_pareto_csv(table, front, pareto_path);
    const auto pareto = testsupport::read_lines(pareto_path);
    ASSERT_EQ(pareto.size(), 3u);
    EXPECT_EQ(pareto[0], "algorithm,pareto_optimal");
    EXPECT_EQ(pareto[1], "B,true");
    EXPECT_EQ(pareto[2], "A,false");
}

TEST(CsvWriters, ComplexityAndTimingSeriesFiles) {
    TempDir dir;
    spinex::bench::ComplexityReport report;
    spinex::bench::ComplexitySeries series;
    series.algorithm = "quad";
    series.d = 2;
    series.slope = 2.0;
    series.complexity_class = "O(n^2)";
    series.medians = {{100, 0.001}, {200, 0.004}};
    report.series.push_back(series);

    spinex::bench::write_complexity_csv(report, dir.file("complexity.csv"));
    const auto lines = testsupport::read_lines(dir.file("complexity.csv"));
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "algorithm,d,slope,class");
    EXPECT_EQ(lines[1], "quad,2,2,O(n^2)");

    spinex::bench::write_timing_series(report, dir.path().string());
    const auto timing = testsupport::read_lines(dir.file("timing_quad_d2.csv"));
    ASSERT_EQ(timing.size(), 3u);
    EXPECT_EQ(timing[0], "n,median_seconds");
    EXPECT_EQ(timing[1], "100,0.001");
    EXPECT_EQ(timing[2], "200,0.004");
}
