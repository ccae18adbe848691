#pragma once

// Explainability: per-observation similarity contributions and nearest
// neighbors, assembled into a per-observation report after clustering.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/similarity.hpp"

namespace spinex::explain {

/// How strongly one observation resembles every other (Pearson row) and how
/// much each feature separates them (absolute coordinate differences).
struct SimilarityAnalysis {
    std::vector<double> similarities;  // length n, entry i is 1 by convention
    Matrix contributions;              // n x d, |x[j,f] - x[i,f]|

    bool operator==(const SimilarityAnalysis&) const = default;
};

struct NeighborAnalysis {
    std::vector<std::size_t> neighbor_indices;  // k nearest, most similar first
    Matrix contributions;                       // k x d, per-neighbor |deltas|

    bool operator==(const NeighborAnalysis&) const = default;
};

struct ObservationExplanation {
    std::optional<SimilarityAnalysis> similarity;
    std::optional<NeighborAnalysis> neighbors;

    bool operator==(const ObservationExplanation&) const = default;
};

struct ExplainabilityReport {
    std::vector<ObservationExplanation> observations;  // indexed by observation

    bool operator==(const ExplainabilityReport&) const = default;
};

namespace impl {

inline std::vector<double> abs_deltas(const DataMatrix& x, std::size_t i, std::size_t j) {
    const std::size_t d = x.n_cols();
    std::vector<double> out(d);
    for (std::size_t f = 0; f < d; ++f) out[f] = std::abs(x(j, f) - x(i, f));
    return out;
}

inline SimilarityAnalysis similarity_analysis_from(const Matrix& pearson, const DataMatrix& x,
                                                   std::size_t i) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    SimilarityAnalysis out;
    out.similarities.assign(pearson.row(i).begin(), pearson.row(i).end());
    out.contributions = Matrix(n, d);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t f = 0; f < d; ++f) {
            out.contributions(j, f) = std::abs(x(j, f) - x(i, f));
        }
    }
    return out;
}

inline NeighborAnalysis neighbor_analysis_from(const Matrix& sim, const DataMatrix& x,
                                               std::size_t i, std::size_t k) {
    const std::size_t n = x.n_rows();
    std::vector<std::size_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sim(i, a) != sim(i, b)) return sim(i, a) > sim(i, b);
        return a < b;
    });
    order.resize(k);

    NeighborAnalysis out;
    out.neighbor_indices = order;
    out.contributions = Matrix(k, x.n_cols());
    for (std::size_t r = 0; r < k; ++r) {
        const auto deltas = abs_deltas(x, i, order[r]);
        for (std::size_t f = 0; f < x.n_cols(); ++f) out.contributions(r, f) = deltas[f];
    }
    return out;
}

}  // namespace impl

/// Pearson-based contribution analysis for observation i, regardless of the
/// similarity method used for clustering.
inline SimilarityAnalysis similarity_contribution(const DataMatrix& x, std::size_t i) {
    if (i >= x.n_rows()) {
        throw std::invalid_argument("similarity_contribution: observation index out of range");
    }
    const SimilarityMatrix pearson = pearson_similarity(x);
    return impl::similarity_analysis_from(pearson.values, x, i);
}

/// The k most similar observations to observation i under `method`,
/// descending similarity, index ascending among exact ties. Requires k < n.
inline NeighborAnalysis nearest_neighbors(const DataMatrix& x, std::size_t i, std::size_t k,
                                          SimilarityMethod method, SimilarityCache& cache,
                                          DecisionLog& log) {
    const std::size_t n = x.n_rows();
    if (i >= n) throw std::invalid_argument("nearest_neighbors: observation index out of range");
    if (k < 1 || k >= n) {
        throw std::invalid_argument("nearest_neighbors: k must lie in [1, n-1]");
    }
    const SimilarityMatrix sim = get_similarity(x, method, cache, log);
    return impl::neighbor_analysis_from(sim.values, x, i, k);
}

/// Builds the full per-observation report using the first configured
/// similarity method for neighbor ranking. Observations may be processed
/// concurrently; results are positioned by index so the report is identical
/// either way.
inline ExplainabilityReport build_report(const DataMatrix& x, const SpinexConfig& cfg,
                                         SimilarityCache& cache, DecisionLog& log,
                                         std::size_t neighbors_k = 5) {
    ExplainabilityReport report;
    if (!cfg.enable_similarity_analysis && !cfg.enable_neighbor_analysis) return report;
    const std::size_t n = x.n_rows();
    report.observations.resize(n);

    std::optional<Matrix> pearson;
    if (cfg.enable_similarity_analysis) {
        pearson = pearson_similarity(x).values;
    }
    std::optional<Matrix> neighbor_sim;
    std::size_t k_eff = 0;
    if (cfg.enable_neighbor_analysis && n > 1) {
        const SimilarityMethod method = cfg.similarity_methods.front();
        neighbor_sim = get_similarity(x, method, cache, log).values;
        k_eff = std::min(neighbors_k, n - 1);
    }

    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ObservationExplanation& obs = report.observations[i];
            if (pearson) {
                obs.similarity = impl::similarity_analysis_from(*pearson, x, i);
            }
            if (neighbor_sim && k_eff > 0) {
                obs.neighbors = impl::neighbor_analysis_from(*neighbor_sim, x, i, k_eff);
            }
        }
    };

    const bool parallel = cfg.use_parallel && n >= cfg.parallel_threshold;
    if (parallel) {
        const std::size_t workers = std::max<std::size_t>(
            2, std::min<std::size_t>(cfg.max_workers.value_or(4), n));
        const std::size_t chunk = (n + workers - 1) / workers;
        std::vector<std::future<void>> futures;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, fill, begin, end));
        }
        for (auto& f : futures) f.get();
    } else {
        fill(0, n);
    }
    log.append("Explainability results computed for " + std::to_string(n) + " observations.");
    return report;
}

}  // namespace spinex::explain
