#pragma once

// Validation metrics: silhouette, Calinski-Harabasz, Davies-Bouldin,
// homogeneity, completeness and V-measure, plus degenerate-case gating,
// caching, tiered composite scoring and best-method selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/similarity.hpp"

namespace spinex::metrics {

/// Raised when a metric is undefined for the given labeling (k <= 1, k = n,
/// coincident points or centroids).
class UndefinedMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_labels(const DataMatrix& x, const ClusterLabels& labels) {
    if (labels.assignments.size() != x.n_rows()) {
        throw std::invalid_argument("metrics: labels length differs from observation count");
    }
}

inline std::vector<std::vector<std::size_t>> members_by_cluster(const ClusterLabels& labels) {
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(labels.n_clusters));
    for (std::size_t i = 0; i < labels.assignments.size(); ++i) {
        members[static_cast<std::size_t>(labels.assignments[i])].push_back(i);
    }
    return members;
}

inline std::vector<std::vector<double>> centroids_of(const DataMatrix& x,
                                                     const std::vector<std::vector<std::size_t>>& members) {
    const std::size_t d = x.n_cols();
    std::vector<std::vector<double>> centroids(members.size(), std::vector<double>(d, 0.0));
    for (std::size_t c = 0; c < members.size(); ++c) {
        for (std::size_t i : members[c]) {
            for (std::size_t j = 0; j < d; ++j) centroids[c][j] += x(i, j);
        }
        for (std::size_t j = 0; j < d; ++j) {
            centroids[c][j] /= static_cast<double>(members[c].size());
        }
    }
    return centroids;
}

}  // namespace detail

/// Mean over points of (b - a) / max(a, b); singleton clusters contribute 0.
inline double silhouette(const DataMatrix& x, const ClusterLabels& labels) {
    detail::check_labels(x, labels);
    const std::size_t n = x.n_rows();
    const auto k = static_cast<std::size_t>(labels.n_clusters);
    if (k <= 1 || k >= n) throw UndefinedMetric("silhouette undefined unless 1 < k < n");

    const auto members = detail::members_by_cluster(labels);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels.assignments[i]);
        if (members[own].size() == 1) continue;  // singleton term is 0
        std::vector<double> sums(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(labels.assignments[j])] +=
                euclidean_distance(x.row(i), x.row(j));
        }
        const double a = sums[own] / static_cast<double>(members[own].size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, sums[c] / static_cast<double>(members[c].size()));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

/// (trace(B)/trace(W)) * (N - k)/(k - 1).
inline double calinski_harabasz(const DataMatrix& x, const ClusterLabels& labels) {
    detail::check_labels(x, labels);
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    const auto k = static_cast<std::size_t>(labels.n_clusters);
    if (k <= 1 || k >= n) throw UndefinedMetric("calinski_harabasz undefined unless 1 < k < n");

    const auto members = detail::members_by_cluster(labels);
    const auto centroids = detail::centroids_of(x, members);
    std::vector<double> grand(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) grand[j] += x(i, j);
    }
    for (std::size_t j = 0; j < d; ++j) grand[j] /= static_cast<double>(n);

    double trace_b = 0.0, trace_w = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        trace_b += static_cast<double>(members[c].size()) *
                   squared_distance(centroids[c], grand);
        for (std::size_t i : members[c]) {
            trace_w += squared_distance(x.row(i), centroids[c]);
        }
    }
    if (trace_w == 0.0) throw UndefinedMetric("calinski_harabasz undefined for coincident points");
    return (trace_b / trace_w) * static_cast<double>(n - k) / static_cast<double>(k - 1);
}

/// Mean over clusters of max_{j != i} (sigma_i + sigma_j) / d(c_i, c_j).
inline double davies_bouldin(const DataMatrix& x, const ClusterLabels& labels) {
    detail::check_labels(x, labels);
    const std::size_t n = x.n_rows();
    const auto k = static_cast<std::size_t>(labels.n_clusters);
    if (k <= 1 || k >= n) throw UndefinedMetric("davies_bouldin undefined unless 1 < k < n");

    const auto members = detail::members_by_cluster(labels);
    const auto centroids = detail::centroids_of(x, members);
    std::vector<double> sigma(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i : members[c]) {
            sigma[c] += euclidean_distance(x.row(i), centroids[c]);
        }
        sigma[c] /= static_cast<double>(members[c].size());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            const double dist = euclidean_distance(centroids[i], centroids[j]);
            if (dist == 0.0) {
                throw UndefinedMetric("davies_bouldin undefined for coincident centroids");
            }
            worst = std::max(worst, (sigma[i] + sigma[j]) / dist);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

namespace detail {

struct Contingency {
    std::vector<std::vector<std::size_t>> counts;  // truth class x predicted cluster
    std::vector<std::size_t> truth_totals;
    std::vector<std::size_t> pred_totals;
    std::size_t n = 0;
};

inline Contingency contingency_of(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) {
        throw std::invalid_argument("metrics: truth and prediction lengths differ");
    }
    if (truth.empty()) throw std::invalid_argument("metrics: empty label vectors");
    const ClusterLabels ct = canonicalize_labels(truth);
    const ClusterLabels cp = canonicalize_labels(pred);
    Contingency out;
    out.n = truth.size();
    out.counts.assign(static_cast<std::size_t>(ct.n_clusters),
                      std::vector<std::size_t>(static_cast<std::size_t>(cp.n_clusters), 0));
    out.truth_totals.assign(static_cast<std::size_t>(ct.n_clusters), 0);
    out.pred_totals.assign(static_cast<std::size_t>(cp.n_clusters), 0);
    for (std::size_t i = 0; i < out.n; ++i) {
        const auto t = static_cast<std::size_t>(ct.assignments[i]);
        const auto p = static_cast<std::size_t>(cp.assignments[i]);
        ++out.counts[t][p];
        ++out.truth_totals[t];
        ++out.pred_totals[p];
    }
    return out;
}

inline double entropy_of(const std::vector<std::size_t>& totals, std::size_t n) {
    double h = 0.0;
    for (std::size_t c : totals) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log(p);
    }
    return h;
}

/// H(C|K): conditional entropy of truth classes given predicted clusters.
inline double conditional_entropy(const Contingency& ct) {
    double h = 0.0;
    for (std::size_t t = 0; t < ct.counts.size(); ++t) {
        for (std::size_t p = 0; p < ct.counts[t].size(); ++p) {
            const std::size_t c = ct.counts[t][p];
            if (c == 0) continue;
            const double joint = static_cast<double>(c) / static_cast<double>(ct.n);
            const double within =
                static_cast<double>(c) / static_cast<double>(ct.pred_totals[p]);
            h -= joint * std::log(within);
        }
    }
    return h;
}

}  // namespace detail

/// h = 1 - H(C|K)/H(C); a zero-entropy class distribution scores 1.
inline double homogeneity(std::span<const int> truth, std::span<const int> pred) {
    const auto ct = detail::contingency_of(truth, pred);
    const double h_c = detail::entropy_of(ct.truth_totals, ct.n);
    if (h_c == 0.0) return 1.0;
    return 1.0 - detail::conditional_entropy(ct) / h_c;
}

/// c = 1 - H(K|C)/H(K); dual of homogeneity.
inline double completeness(std::span<const int> truth, std::span<const int> pred) {
    return homogeneity(pred, truth);
}

/// v = 2hc/(h+c); defined as 0 when h = c = 0.
inline double v_measure(std::span<const int> truth, std::span<const int> pred) {
    const double h = homogeneity(truth, pred);
    const double c = completeness(truth, pred);
    if (h + c == 0.0) return 0.0;
    return 2.0 * h * c / (h + c);
}

// ---------------------------------------------------------------------------
// MetricsRecord and evaluation
// ---------------------------------------------------------------------------
struct MetricsRecord {
    int n_clusters = 0;
    std::optional<double> silhouette;
    std::optional<double> calinski_harabasz;
    std::optional<double> davies_bouldin;
    std::optional<double> homogeneity;
    std::optional<double> completeness;
    std::optional<double> v_measure;

    bool operator==(const MetricsRecord&) const = default;
};

class MetricsCache {
public:
    using Key = std::tuple<MatrixFingerprint, MatrixFingerprint, std::string>;

    std::optional<MetricsRecord> find(const Key& key) const {
        std::scoped_lock lock(mu_);
        auto it = store_.find(key);
        if (it == store_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }

    void insert(const Key& key, const MetricsRecord& record) {
        std::scoped_lock lock(mu_);
        store_.insert_or_assign(key, record);
    }

    std::size_t hits() const {
        std::scoped_lock lock(mu_);
        return hits_;
    }

    std::size_t misses() const {
        std::scoped_lock lock(mu_);
        return misses_;
    }

private:
    mutable std::mutex mu_;
    mutable std::size_t hits_ = 0;
    mutable std::size_t misses_ = 0;
    std::map<Key, MetricsRecord> store_;
};

/// Computes the gated metric record without caching. Internal metrics fill
/// for tiers 1 and 3, external ones for tiers 2 and 3 when ground truth is
/// present, and only while 1 < k < n. A metric failure is logged under `tag`
/// and leaves the remaining fields of its block undefined.
inline MetricsRecord compute_record(const DataMatrix& x, const ClusterLabels& labels, int tier,
                                    const std::optional<std::vector<int>>& ground_truth,
                                    DecisionLog* log = nullptr, const std::string& tag = "") {
    detail::check_labels(x, labels);
    MetricsRecord rec;
    rec.n_clusters = labels.n_clusters;
    const auto n = x.n_rows();
    const auto k = static_cast<std::size_t>(labels.n_clusters);
    if (!(k > 1 && k < n)) return rec;

    try {
        if (tier == 1 || tier == 3) {
            rec.silhouette = silhouette(x, labels);
            rec.calinski_harabasz = calinski_harabasz(x, labels);
            rec.davies_bouldin = davies_bouldin(x, labels);
        }
        if ((tier == 2 || tier == 3) && ground_truth.has_value()) {
            rec.homogeneity = homogeneity(*ground_truth, labels.assignments);
            rec.completeness = completeness(*ground_truth, labels.assignments);
            rec.v_measure = v_measure(*ground_truth, labels.assignments);
        }
    } catch (const std::exception& e) {
        if (log != nullptr) {
            log->append("Error calculating metrics for " + (tag.empty() ? "labels" : tag) + ": " +
                        e.what());
        }
    }
    return rec;
}

/// Cache-aware evaluation keyed by (data fingerprint, labels fingerprint,
/// method name).
inline MetricsRecord evaluate(const DataMatrix& x, const ClusterLabels& labels,
                              SimilarityMethod method, int tier,
                              const std::optional<std::vector<int>>& ground_truth,
                              MetricsCache& cache, DecisionLog& log) {
    const MetricsCache::Key key{fingerprint(x), fingerprint_labels(labels.assignments),
                                to_string(method)};
    if (auto hit = cache.find(key)) {
        log.append("Metrics retrieved from cache for method: " + to_string(method));
        return *hit;
    }
    const MetricsRecord rec = compute_record(x, labels, tier, ground_truth, &log,
                                             to_string(method));
    cache.insert(key, rec);
    log.append("Metrics computed and cached for method: " + to_string(method));
    return rec;
}

/// Tiered composite: squashes each defined metric into [0,1] and averages.
/// Tier 1 uses the internal block, tier 2 the external block, tier 3 all
/// six. With nothing defined the score is -infinity, so such labelings are
/// never selected.
inline double composite_score(const MetricsRecord& m, int tier) {
    if (tier < 1 || tier > 3) throw std::invalid_argument("composite_score: tier must be 1..3");
    std::vector<double> parts;
    if (tier == 1 || tier == 3) {
        if (m.silhouette) parts.push_back((*m.silhouette + 1.0) / 2.0);
        if (m.calinski_harabasz) parts.push_back(*m.calinski_harabasz / (*m.calinski_harabasz + 1.0));
        if (m.davies_bouldin) parts.push_back(1.0 / (1.0 + *m.davies_bouldin));
    }
    if (tier == 2 || tier == 3) {
        if (m.homogeneity) parts.push_back(*m.homogeneity);
        if (m.completeness) parts.push_back(*m.completeness);
        if (m.v_measure) parts.push_back(*m.v_measure);
    }
    if (parts.empty()) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double p : parts) s += p;
    return s / static_cast<double>(parts.size());
}

/// Clusters with every configured method and returns the labeling with the
/// highest composite score. A single configured method short-circuits
/// without any metric evaluation; ties go to the earlier method in the
/// configured order.
inline std::pair<ClusterLabels, SimilarityMethod> find_best(const DataMatrix& x,
                                                            const SpinexConfig& cfg,
                                                            SimilarityCache& sim_cache,
                                                            preprocess::PcaCache& pca_cache,
                                                            MetricsCache& metrics_cache,
                                                            DecisionLog& log) {
    if (cfg.similarity_methods.empty()) {
        throw std::invalid_argument("find_best: no similarity methods configured");
    }
    auto results = engine::cluster_all_methods(x, cfg, sim_cache, pca_cache, log);
    if (results.size() == 1) {
        return {std::move(results.front().second), results.front().first};
    }
    std::size_t best_idx = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const MetricsRecord rec = evaluate(x, results[i].second, results[i].first,
                                           cfg.evaluation_tier, cfg.ground_truth, metrics_cache,
                                           log);
        const double score = composite_score(rec, cfg.evaluation_tier);
        log.append("Composite score for " + to_string(results[i].first) + ": " +
                   format_double(score));
        if (first || score > best_score) {
            best_score = score;
            best_idx = i;
            first = false;
        }
    }
    return {std::move(results[best_idx].second), results[best_idx].first};
}

}  // namespace spinex::metrics
