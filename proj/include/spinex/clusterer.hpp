#pragma once

// SpinexClustering: the user-facing entry point that wires preprocessing,
// method selection, optional multi-level refinement and explainability into
// one fit_predict call.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/explain.hpp"
#include "spinex/metrics.hpp"
#include "spinex/preprocess.hpp"
#include "spinex/similarity.hpp"

namespace spinex {

class SpinexClustering {
public:
    explicit SpinexClustering(SpinexConfig cfg = {}) : cfg_(std::move(cfg)) { cfg_.validate(); }

    /// Clusters a 2-d data matrix.
    ClusterLabels fit_predict(const DataMatrix& x) {
        const DataMatrix reduced = preprocess::enforce_max_features(x, cfg_.max_features, log_);
        auto [labels, best] =
            metrics::find_best(reduced, cfg_, sim_cache_, pca_cache_, metrics_cache_, log_);
        if (cfg_.use_multi_level) {
            log_.append("Applying multi-level clustering to the best similarity matrix");
            const SimilarityMatrix sim = get_similarity(reduced, best, sim_cache_, log_);
            labels = engine::cluster_from_similarity(sim.values, reduced.n_rows(), std::nullopt,
                                                     cfg_, log_);
        }
        log_.append("Best clustering method: " + to_string(best));
        best_method_ = best;
        if (cfg_.enable_similarity_analysis || cfg_.enable_neighbor_analysis) {
            explainability_ = explain::build_report(reduced, cfg_, sim_cache_, log_);
        }
        return canonicalize_labels(labels.assignments);
    }

    /// One-dimensional input is treated as an n x 1 matrix.
    ClusterLabels fit_predict(std::span<const double> series) {
        std::vector<double> values(series.begin(), series.end());
        return fit_predict(DataMatrix(values.size(), 1, std::move(values)));
    }

    /// Shape-checked entry: accepts flat values plus an explicit shape of
    /// rank 1 or 2. Higher ranks are rejected.
    ClusterLabels fit_predict(const std::vector<double>& values,
                              const std::vector<std::size_t>& shape) {
        if (shape.size() == 1) {
            return fit_predict(std::span<const double>(values));
        }
        if (shape.size() == 2) {
            return fit_predict(DataMatrix(shape[0], shape[1], values));
        }
        throw std::invalid_argument("Input array X should be 1D or 2D.");
    }

    const SpinexConfig& config() const { return cfg_; }
    DecisionLog& decision_log() { return log_; }
    const DecisionLog& decision_log() const { return log_; }
    SimilarityCache& similarity_cache() { return sim_cache_; }
    preprocess::PcaCache& pca_cache() { return pca_cache_; }
    metrics::MetricsCache& metrics_cache() { return metrics_cache_; }
    const explain::ExplainabilityReport& explainability_results() const { return explainability_; }
    std::optional<SimilarityMethod> best_method() const { return best_method_; }

private:
    SpinexConfig cfg_;
    DecisionLog log_;
    SimilarityCache sim_cache_;
    preprocess::PcaCache pca_cache_;
    metrics::MetricsCache metrics_cache_;
    explain::ExplainabilityReport explainability_;
    std::optional<SimilarityMethod> best_method_;
};

}  // namespace spinex
