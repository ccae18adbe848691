#pragma once

// Reference algorithms for the benchmark harness: k-means (k-means++ and
// Lloyd iterations), DBSCAN, and complete-linkage agglomerative clustering
// reusing the engine's linkage implementation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"

namespace spinex::baselines {

struct KmeansResult {
    ClusterLabels labels;
    double wcss = 0.0;
    std::vector<double> wcss_history;  // per Lloyd iteration of the winning restart
};

namespace detail {

inline std::vector<std::vector<double>> kmeanspp_init(const DataMatrix& x, std::size_t k,
                                                      Rng& rng) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    const std::size_t first = rng.uniform_index(n);
    centers.emplace_back(x.row(first).begin(), x.row(first).end());

    std::vector<double> dist2(n);
    for (std::size_t i = 0; i < n; ++i) dist2[i] = squared_distance(x.row(i), centers[0]);

    while (centers.size() < k) {
        double total = 0.0;
        for (double v : dist2) total += v;
        std::size_t pick;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist2[i];
                if (cum >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all remaining points coincide with a center; any point works
            pick = rng.uniform_index(n);
        }
        centers.emplace_back(x.row(pick).begin(), x.row(pick).end());
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], squared_distance(x.row(i), centers.back()));
        }
        (void)d;
    }
    return centers;
}

struct LloydOutcome {
    std::vector<int> assignment;
    double wcss = 0.0;
    std::vector<double> history;
};

inline LloydOutcome lloyd(const DataMatrix& x, std::vector<std::vector<double>> centers,
                          std::size_t max_iter) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    const std::size_t k = centers.size();
    LloydOutcome out;
    out.assignment.assign(n, -1);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double dd = squared_distance(x.row(i), centers[c]);
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            if (out.assignment[i] != static_cast<int>(best)) {
                out.assignment[i] = static_cast<int>(best);
                changed = true;
            }
        }

        // reseed empty clusters with the point farthest from its centroid
        std::vector<std::size_t> counts(k, 0);
        for (int a : out.assignment) ++counts[static_cast<std::size_t>(a)];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto own = static_cast<std::size_t>(out.assignment[i]);
                if (counts[own] <= 1) continue;
                const double dd = squared_distance(x.row(i), centers[own]);
                if (dd > far_d) {
                    far_d = dd;
                    far = i;
                }
            }
            --counts[static_cast<std::size_t>(out.assignment[far])];
            out.assignment[far] = static_cast<int>(c);
            counts[c] = 1;
            changed = true;
        }

        for (std::size_t c = 0; c < k; ++c) {
            std::fill(centers[c].begin(), centers[c].end(), 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(out.assignment[i]);
            for (std::size_t f = 0; f < d; ++f) centers[c][f] += x(i, f);
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t f = 0; f < d; ++f) {
                centers[c][f] /= static_cast<double>(counts[c]);
            }
        }

        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wcss += squared_distance(x.row(i), centers[static_cast<std::size_t>(out.assignment[i])]);
        }
        out.history.push_back(wcss);
        out.wcss = wcss;
        if (!changed) break;
    }
    return out;
}

}  // namespace detail

/// k-means with k-means++ seeding and Lloyd iterations; keeps the best of
/// n_init restarts by within-cluster sum of squares. Deterministic in seed.
inline KmeansResult kmeans(const DataMatrix& x, std::size_t k, std::uint64_t seed,
                           std::size_t max_iter = 300, std::size_t n_init = 10) {
    const std::size_t n = x.n_rows();
    if (k < 1 || k > n) throw std::invalid_argument("kmeans: k must lie in [1, n]");
    Rng rng(seed);
    KmeansResult best;
    bool have = false;
    for (std::size_t restart = 0; restart < n_init; ++restart) {
        auto centers = detail::kmeanspp_init(x, k, rng);
        auto outcome = detail::lloyd(x, std::move(centers), max_iter);
        if (!have || outcome.wcss < best.wcss) {
            best.labels = canonicalize_labels(outcome.assignment);
            best.wcss = outcome.wcss;
            best.wcss_history = std::move(outcome.history);
            have = true;
        }
    }
    return best;
}

/// DBSCAN with an inclusive eps neighborhood that counts the point itself.
/// Core points connect within eps; border points join their nearest core;
/// noise points become singleton clusters so every metric stays total.
inline ClusterLabels dbscan(const DataMatrix& x, double eps, std::size_t min_samples = 5) {
    if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be positive");
    if (min_samples < 1) throw std::invalid_argument("dbscan: min_samples must be >= 1");
    const std::size_t n = x.n_rows();

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (euclidean_distance(x.row(i), x.row(j)) <= eps) neighbors[i].push_back(j);
        }
    }
    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= min_samples;

    std::vector<int> labels(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || labels[i] != -1) continue;
        const int cluster = next++;
        std::queue<std::size_t> frontier;
        labels[i] = cluster;
        frontier.push(i);
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop();
            for (std::size_t q : neighbors[p]) {
                if (!core[q] || labels[q] != -1) continue;
                labels[q] = cluster;
                frontier.push(q);
            }
        }
    }

    // border points attach to the nearest core point
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i] || labels[i] != -1) continue;
        double best_d = std::numeric_limits<double>::infinity();
        int best_label = -1;
        for (std::size_t q : neighbors[i]) {
            if (!core[q]) continue;
            const double dd = euclidean_distance(x.row(i), x.row(q));
            if (dd < best_d) {
                best_d = dd;
                best_label = labels[q];
            }
        }
        labels[i] = best_label;  // stays -1 for noise
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == -1) labels[i] = next++;
    }
    return canonicalize_labels(labels);
}

/// Complete-linkage agglomerative clustering on Euclidean distances, cut at
/// exactly k clusters.
inline ClusterLabels agglomerative(const DataMatrix& x, std::size_t k) {
    const std::size_t n = x.n_rows();
    if (k < 1 || k > n) throw std::invalid_argument("agglomerative: k must lie in [1, n]");
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = euclidean_distance(x.row(i), x.row(j));
            dist(i, j) = v;
            dist(j, i) = v;
        }
    }
    return engine::complete_linkage_cut(dist, k);
}

}  // namespace spinex::baselines
