#include <gtest/gtest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/explain.hpp"
#include "spinex/similarity.hpp"
#include "test_support.hpp"

using spinex::DataMatrix;
using spinex::DecisionLog;
using spinex::SimilarityCache;
using spinex::SimilarityMethod;
using spinex::SpinexConfig;
using testsupport::matrix_of;
using testsupport::random_data;

namespace {

// Generic rows plus an exact duplicate of row 0 at index 1.
DataMatrix with_duplicate() {
    return matrix_of({{1.0, 2.0, 3.0},
                      {1.0, 2.0, 3.0},
                      {5.0, 1.0, 9.0},
                      {2.0, 7.0, 4.0},
                      {8.0, 3.0, 2.0}});
}

}  // namespace

TEST(SimilarityContribution, PearsonRowWithAbsoluteDeltas) {
    const DataMatrix x = with_duplicate();
    const auto analysis = spinex::explain::similarity_contribution(x, 0);

    const auto pearson = spinex::pearson_similarity(x);
    ASSERT_EQ(analysis.similarities.size(), x.n_rows());
    for (std::size_t j = 0; j < x.n_rows(); ++j) {
        EXPECT_DOUBLE_EQ(analysis.similarities[j], pearson.values(0, j));
    }
    EXPECT_DOUBLE_EQ(analysis.similarities[0], 1.0);

    ASSERT_EQ(analysis.contributions.rows(), x.n_rows());
    ASSERT_EQ(analysis.contributions.cols(), x.n_cols());
    for (std::size_t j = 0; j < x.n_rows(); ++j) {
        for (std::size_t f = 0; f < x.n_cols(); ++f) {
            EXPECT_DOUBLE_EQ(analysis.contributions(j, f), std::abs(x(j, f) - x(0, f)));
        }
    }
    for (std::size_t f = 0; f < x.n_cols(); ++f) {
        EXPECT_DOUBLE_EQ(analysis.contributions(0, f), 0.0);
    }

    EXPECT_THROW(spinex::explain::similarity_contribution(x, x.n_rows()), std::invalid_argument);
}

TEST(NearestNeighbors, DuplicateRowRanksFirstUnderEveryMethod) {
    const DataMatrix x = with_duplicate();
    SimilarityCache cache;
    DecisionLog log;

    for (SimilarityMethod method : spinex::all_similarity_methods()) {
        const auto analysis = spinex::explain::nearest_neighbors(x, 0, 3, method, cache, log);
        ASSERT_EQ(analysis.neighbor_indices.size(), 3u) << to_string(method);
        EXPECT_EQ(analysis.neighbor_indices[0], 1u) << to_string(method);
        for (std::size_t f = 0; f < x.n_cols(); ++f) {
            EXPECT_DOUBLE_EQ(analysis.contributions(0, f), 0.0) << to_string(method);
        }
    }
}

TEST(NearestNeighbors, OrdersBySimilarityThenIndex) {
    // Points 1 and 2 are equidistant from point 0, so the kernel similarities
    // tie exactly and the lower index must come first.
    const DataMatrix x = matrix_of({{0.0}, {1.0}, {-1.0}, {3.0}});
    SimilarityCache cache;
    DecisionLog log;

    const auto analysis =
        spinex::explain::nearest_neighbors(x, 0, 3, SimilarityMethod::kernel, cache, log);
    EXPECT_EQ(analysis.neighbor_indices, (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_DOUBLE_EQ(analysis.contributions(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(analysis.contributions(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(analysis.contributions(2, 0), 3.0);
}

TEST(NearestNeighbors, ValidatesIndexAndK) {
    const DataMatrix x = with_duplicate();
    SimilarityCache cache;
    DecisionLog log;
    const auto n = x.n_rows();

    EXPECT_THROW(spinex::explain::nearest_neighbors(x, n, 2, SimilarityMethod::cosine, cache, log),
                 std::invalid_argument);
    EXPECT_THROW(spinex::explain::nearest_neighbors(x, 0, 0, SimilarityMethod::cosine, cache, log),
                 std::invalid_argument);
    EXPECT_THROW(spinex::explain::nearest_neighbors(x, 0, n, SimilarityMethod::cosine, cache, log),
                 std::invalid_argument);
    const auto widest =
        spinex::explain::nearest_neighbors(x, 0, n - 1, SimilarityMethod::cosine, cache, log);
    EXPECT_EQ(widest.neighbor_indices.size(), n - 1);
}

TEST(BuildReport, DisabledFlagsProduceEmptyReport) {
    const DataMatrix x = with_duplicate();
    SpinexConfig cfg;  // both analysis flags default off
    SimilarityCache cache;
    DecisionLog log;

    const auto report = spinex::explain::build_report(x, cfg, cache, log);
    EXPECT_TRUE(report.observations.empty());
    EXPECT_FALSE(log.contains("Explainability results computed"));
}

TEST(BuildReport, SimilarityOnlyFillsJustThatBlock) {
    const DataMatrix x = with_duplicate();
    SpinexConfig cfg;
    cfg.enable_similarity_analysis = true;
    SimilarityCache cache;
    DecisionLog log;

    const auto report = spinex::explain::build_report(x, cfg, cache, log);
    ASSERT_EQ(report.observations.size(), x.n_rows());
    for (const auto& obs : report.observations) {
        EXPECT_TRUE(obs.similarity.has_value());
        EXPECT_FALSE(obs.neighbors.has_value());
    }
    EXPECT_TRUE(log.contains("Explainability results computed for 5 observations."));
    EXPECT_EQ(cache.size(), 0u);  // the Pearson pass bypasses the method cache
}

TEST(BuildReport, NeighborCountClampsToAvailableObservations) {
    const DataMatrix x = with_duplicate();
    SpinexConfig cfg;
    cfg.enable_neighbor_analysis = true;
    SimilarityCache cache;
    DecisionLog log;

    const auto report = spinex::explain::build_report(x, cfg, cache, log, 100);
    ASSERT_EQ(report.observations.size(), x.n_rows());
    for (const auto& obs : report.observations) {
        ASSERT_TRUE(obs.neighbors.has_value());
        EXPECT_EQ(obs.neighbors->neighbor_indices.size(), x.n_rows() - 1);
    }
}

TEST(BuildReport, ParallelAndSequentialReportsAreIdentical) {
    spinex::Rng rng(99);
    const DataMatrix x = random_data(12, 4, rng);

    SpinexConfig sequential;
    sequential.enable_similarity_analysis = true;
    sequential.enable_neighbor_analysis = true;

    SpinexConfig parallel = sequential;
    parallel.use_parallel = true;
    parallel.parallel_threshold = 1;
    parallel.max_workers = 3;

    SimilarityCache cache_a;
    SimilarityCache cache_b;
    DecisionLog log_a;
    DecisionLog log_b;
    const auto report_a = spinex::explain::build_report(x, sequential, cache_a, log_a);
    const auto report_b = spinex::explain::build_report(x, parallel, cache_b, log_b);

    ASSERT_EQ(report_a.observations.size(), report_b.observations.size());
    EXPECT_TRUE(report_a == report_b);
    EXPECT_TRUE(log_b.contains("Explainability results computed for 12 observations."));
}
