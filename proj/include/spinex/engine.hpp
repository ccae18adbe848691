#pragma once

// Clustering engine: threshold rules, iterative pairwise-average merging,
// dynamic threshold search, multi-level clustering over condensed matrices,
// and the complete-linkage fallback used when a cluster count is requested.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/preprocess.hpp"
#include "spinex/similarity.hpp"

namespace spinex::engine {

namespace detail {

inline double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

/// Percentile with linear interpolation between order statistics.
inline double percentile_of(std::vector<double> xs, double p) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n == 1) return xs[0];
    const double pos = p / 100.0 * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return xs[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

}  // namespace detail

/// Resolves a threshold specification against a similarity matrix.
/// The adaptive rule takes the median of all entries plus the population
/// standard deviation of the strictly-above-median entries; when nothing
/// exceeds the median it falls back to the maximum entry.
inline double set_threshold(const Matrix& sim, const ThresholdSpec& spec, DecisionLog& log) {
    if (sim.size() == 0) throw std::invalid_argument("set_threshold: empty matrix");
    switch (spec.kind) {
        case ThresholdSpec::Kind::automatic: {
            const double med = detail::median_of(sim.values());
            std::vector<double> above;
            for (double v : sim.values()) {
                if (v > med) above.push_back(v);
            }
            double threshold;
            if (above.empty()) {
                threshold = *std::max_element(sim.values().begin(), sim.values().end());
            } else {
                threshold = med + population_stddev(above);
            }
            log.append("Adaptive threshold set using density-based approach: " +
                       format_double(threshold));
            return threshold;
        }
        case ThresholdSpec::Kind::percentile: {
            const double threshold = detail::percentile_of(sim.values(), spec.value);
            log.append("Threshold set using percentile: " + format_double(threshold));
            return threshold;
        }
        case ThresholdSpec::Kind::fixed: {
            log.append("Threshold set using fixed value: " + format_double(spec.value));
            return spec.value;
        }
    }
    throw std::invalid_argument("set_threshold: unknown threshold kind");
}

/// Two clusters merge when the mean similarity over all cross pairs strictly
/// exceeds the threshold. Both member lists must be non-empty.
inline bool should_merge(std::span<const int> cluster1, std::span<const int> cluster2,
                         const Matrix& sim, double threshold) {
    double total = 0.0;
    for (int i : cluster1) {
        for (int j : cluster2) {
            total += sim(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    const auto count = static_cast<double>(cluster1.size() * cluster2.size());
    return total / count > threshold;
}

/// Iterative agglomeration: starting from singletons, repeatedly scans
/// cluster pairs in ascending label order and merges the first pair whose
/// cross-pair mean similarity exceeds the threshold, restarting the scan
/// after every merge. Terminates when no pair qualifies.
///
/// Each cluster is identified by its smallest member, so canonical label
/// order coincides with identity order and the restart scan is equivalent to
/// visiting pending pairs in ascending identity order. Cross-cluster sums
/// are maintained incrementally and a pair is only re-evaluated after one of
/// its sides changes, which keeps the whole run near O(n^2 log n) instead of
/// rescanning every pair from scratch after every merge.
inline ClusterLabels merge_clusters(const Matrix& sim, double threshold) {
    const std::size_t n = sim.rows();
    if (n == 0) throw std::invalid_argument("merge_clusters: empty matrix");

    std::vector<double> sums(n * n, 0.0);  // sums[a * n + b], a < b, cross-block total
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) sums[i * n + j] = sim(i, j);
    }
    std::vector<double> counts(n, 1.0);
    std::vector<char> alive(n, 1);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);

    // Doubly linked list over alive identities for O(k) partner sweeps.
    std::vector<int> next(n), prev(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = (i + 1 < n) ? static_cast<int>(i + 1) : -1;
        prev[i] = static_cast<int>(i) - 1;
    }
    int head = 0;

    // Min-heap of packed (a << 32) | b pairs; numeric order is scan order.
    // Stale and duplicate entries are skipped or harmlessly re-evaluated.
    std::vector<std::uint64_t> initial;
    initial.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            initial.push_back((static_cast<std::uint64_t>(i) << 32) | j);
        }
    }
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> pending(
        std::greater<>{}, std::move(initial));

    while (!pending.empty()) {
        const std::uint64_t key = pending.top();
        pending.pop();
        const auto a = static_cast<std::size_t>(key >> 32);
        const auto b = static_cast<std::size_t>(key & 0xffffffffULL);
        if (!alive[a] || !alive[b]) continue;
        if (!(sums[a * n + b] / (counts[a] * counts[b]) > threshold)) continue;

        parent[b] = static_cast<int>(a);
        counts[a] += counts[b];
        alive[b] = 0;
        if (prev[b] >= 0) next[static_cast<std::size_t>(prev[b])] = next[b];
        if (next[b] >= 0) prev[static_cast<std::size_t>(next[b])] = prev[b];
        if (head == static_cast<int>(b)) head = next[b];

        for (int x = head; x >= 0; x = next[static_cast<std::size_t>(x)]) {
            const auto xi = static_cast<std::size_t>(x);
            if (xi == a) continue;
            const std::size_t from = std::min(xi, b) * n + std::max(xi, b);
            const std::size_t lo = std::min(xi, a);
            const std::size_t hi = std::max(xi, a);
            sums[lo * n + hi] += sums[from];
            pending.push((static_cast<std::uint64_t>(lo) << 32) | hi);
        }
    }

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        int root = static_cast<int>(i);
        while (parent[static_cast<std::size_t>(root)] != root) {
            root = parent[static_cast<std::size_t>(root)];
        }
        labels[i] = root;
    }
    return canonicalize_labels(labels);
}

/// Decays a starting threshold until the resulting cluster count stops
/// changing between consecutive iterations, and returns that threshold.
inline double dynamic_threshold(const Matrix& sim, double initial = 0.5, double decay_rate = 0.9,
                                int max_iterations = 10) {
    if (max_iterations < 1) throw std::invalid_argument("dynamic_threshold: need >= 1 iteration");
    if (!(decay_rate > 0.0 && decay_rate < 1.0)) {
        throw std::invalid_argument("dynamic_threshold: decay_rate must lie in (0,1)");
    }
    double threshold = initial;
    int previous = -1;
    for (int it = 0; it < max_iterations; ++it) {
        const int count = merge_clusters(sim, threshold).n_clusters;
        if (it > 0 && count == previous) return threshold;
        previous = count;
        if (it < max_iterations - 1) threshold *= decay_rate;
    }
    return threshold;
}

/// k x k matrix of mean similarities between cluster memberships, computed
/// over the full cross product of original observations (diagonal blocks
/// include self pairs). Labels must be canonical.
inline Matrix condense_similarity(const Matrix& sim, const ClusterLabels& labels) {
    const auto k = static_cast<std::size_t>(labels.n_clusters);
    const std::size_t n = sim.rows();
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) {
        members[static_cast<std::size_t>(labels.assignments[i])].push_back(i);
    }
    Matrix out(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double total = 0.0;
            for (std::size_t i : members[a]) {
                for (std::size_t j : members[b]) total += sim(i, j);
            }
            const double v = total / static_cast<double>(members[a].size() * members[b].size());
            out(a, b) = v;
            out(b, a) = v;
        }
    }
    return out;
}

/// Hierarchical refinement: merges at the current threshold, condenses the
/// original similarity matrix over the new clusters, adapts the threshold
/// from the variance trend and the merge rate, then repeats on the condensed
/// matrix. Stops early when a level leaves the cluster count unchanged or a
/// single cluster remains. `level_matrices`, when supplied, receives each
/// condensed matrix as it is built.
inline ClusterLabels multi_level_clustering(const Matrix& sim, double initial_threshold,
                                            int levels, DecisionLog* log = nullptr,
                                            std::vector<Matrix>* level_matrices = nullptr) {
    if (levels < 1) throw std::invalid_argument("multi_level_clustering: levels must be >= 1");
    const std::size_t n = sim.rows();
    if (n == 0) throw std::invalid_argument("multi_level_clustering: empty matrix");

    std::vector<int> point_cluster(n);
    for (std::size_t i = 0; i < n; ++i) point_cluster[i] = static_cast<int>(i);
    ClusterLabels result = canonicalize_labels(point_cluster);

    Matrix current = sim;
    double prev_variance = population_variance(current.values());
    int prev_count = static_cast<int>(n);
    double threshold = initial_threshold;

    for (int level = 0; level < levels; ++level) {
        const ClusterLabels sub = merge_clusters(current, threshold);
        for (std::size_t i = 0; i < n; ++i) {
            point_cluster[i] =
                sub.assignments[static_cast<std::size_t>(point_cluster[i])];
        }
        result = canonicalize_labels(point_cluster);
        point_cluster = result.assignments;
        const int count = result.n_clusters;
        if (log != nullptr) {
            log->append("Multi-level clustering level " + std::to_string(level + 1) + ": " +
                        std::to_string(count) + " clusters");
        }
        if (count == prev_count) break;

        const Matrix condensed = condense_similarity(sim, result);
        if (level_matrices != nullptr) level_matrices->push_back(condensed);
        if (condensed.rows() <= 1) break;

        const double variance = population_variance(condensed.values());
        if (variance < prev_variance) threshold *= 0.9;
        const double rate =
            std::abs(prev_count - count) / static_cast<double>(std::max(prev_count, 1));
        threshold = std::min(1.0, threshold * (1.0 + 0.2 * std::min(rate, 1.0)));

        prev_variance = variance;
        prev_count = count;
        current = condensed;
    }
    return result;
}

/// Complete-linkage agglomeration on a distance matrix, cut at exactly k
/// clusters. Deterministic: among equally distant pairs the first in
/// ascending (i, j) slot order merges, and a merged cluster keeps the
/// smaller slot.
inline ClusterLabels complete_linkage_cut(const Matrix& distances, std::size_t k) {
    const std::size_t n = distances.rows();
    if (n == 0) throw std::invalid_argument("complete_linkage_cut: empty matrix");
    if (k < 1 || k > n) throw std::invalid_argument("complete_linkage_cut: k must lie in [1, n]");

    Matrix cd = distances;
    std::vector<bool> active(n, true);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    std::size_t count = n;
    while (count > k) {
        std::size_t best_a = 0, best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!active[b]) continue;
                if (cd(a, b) < best) {
                    best = cd(a, b);
                    best_a = a;
                    best_b = b;
                }
            }
        }
        members[best_a].insert(members[best_a].end(), members[best_b].begin(),
                               members[best_b].end());
        members[best_b].clear();
        active[best_b] = false;
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == best_a) continue;
            const double fused = std::max(cd(best_a, c), cd(best_b, c));
            cd(best_a, c) = fused;
            cd(c, best_a) = fused;
        }
        --count;
    }

    std::vector<int> labels(n, -1);
    int next = 0;
    for (std::size_t slot = 0; slot < n; ++slot) {
        if (!active[slot]) continue;
        for (std::size_t i : members[slot]) labels[i] = next;
        ++next;
    }
    return canonicalize_labels(labels);
}

/// Converts similarity to distance (1 - clip(S, -1, 1), zeroed diagonal,
/// symmetrized, clamped non-negative) and cuts a complete-linkage tree at k.
/// A degenerate all-zero distance matrix short-circuits to one cluster.
inline ClusterLabels linkage_cut(const Matrix& sim, std::size_t k, DecisionLog* log = nullptr) {
    const std::size_t n = sim.rows();
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist(i, j) = 1.0 - std::clamp(sim(i, j), -1.0, 1.0);
        }
    }
    for (std::size_t i = 0; i < n; ++i) dist(i, i) = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::max(0.0, (dist(i, j) + dist(j, i)) / 2.0);
            dist(i, j) = v;
            dist(j, i) = v;
        }
    }
    const bool all_zero =
        std::all_of(dist.values().begin(), dist.values().end(), [](double v) { return v == 0.0; });
    if (all_zero) {
        if (log != nullptr) {
            log->append("Degenerate distance matrix in hierarchical clustering; "
                        "returning a single cluster.");
        }
        return canonicalize_labels(std::vector<int>(n, 0));
    }
    return complete_linkage_cut(dist, k);
}

/// Clustering dispatch shared by every similarity method. A single-row (or
/// scalar) matrix trivially yields one cluster; the multi-level flag takes
/// precedence; an explicit n_clusters below n cuts a linkage tree; otherwise
/// threshold merging runs, defaulting to 0.5 when no threshold was resolved.
inline ClusterLabels cluster_from_similarity(const Matrix& sim, std::size_t n,
                                             std::optional<double> threshold,
                                             const SpinexConfig& cfg, DecisionLog& log) {
    if (sim.rows() <= 1) {
        return canonicalize_labels(std::vector<int>(std::max<std::size_t>(n, 1), 0));
    }
    if (cfg.use_multi_level) {
        log.append("Using multi-level clustering");
        try {
            const ClusterLabels labels =
                multi_level_clustering(sim, cfg.multi_level_params.initial_threshold,
                                       cfg.multi_level_params.levels, &log);
            log.append("Multi-level clustering completed with " +
                       std::to_string(labels.n_clusters) + " clusters");
            return labels;
        } catch (const std::exception& e) {
            log.append(std::string("Error in multi-level clustering: ") + e.what() +
                       ". Falling back to default clustering.");
            return merge_clusters(sim, threshold.value_or(0.5));
        }
    }
    const bool has_spread =
        !std::all_of(sim.values().begin(), sim.values().end(),
                     [&](double v) { return v == sim.values().front(); });
    if (cfg.n_clusters.has_value() && *cfg.n_clusters < sim.rows() && has_spread) {
        try {
            return linkage_cut(sim, *cfg.n_clusters, &log);
        } catch (const std::exception& e) {
            log.append(std::string("Error in hierarchical clustering: ") + e.what());
            return canonicalize_labels(std::vector<int>(sim.rows(), 0));
        }
    }
    return merge_clusters(sim, threshold.value_or(0.5));
}

/// One full clustering pass with a single similarity method: optional PCA,
/// similarity computation, threshold resolution, then dispatch.
inline ClusterLabels cluster_with_method(const DataMatrix& x, SimilarityMethod method,
                                         const SpinexConfig& cfg, SimilarityCache& sim_cache,
                                         preprocess::PcaCache& pca_cache, DecisionLog& log) {
    if (std::find(cfg.similarity_methods.begin(), cfg.similarity_methods.end(), method) ==
        cfg.similarity_methods.end()) {
        std::string allowed;
        for (std::size_t i = 0; i < cfg.similarity_methods.size(); ++i) {
            if (i > 0) allowed += " ";
            allowed += to_string(cfg.similarity_methods[i]);
        }
        throw std::invalid_argument("Invalid similarity method. Choose from " + allowed + ".");
    }
    const DataMatrix reduced = preprocess::apply_pca(x, cfg, pca_cache, log);
    log.append("Shape of X before similarity matrix calculation: (" +
               std::to_string(reduced.n_rows()) + ", " + std::to_string(reduced.n_cols()) + ")");
    const SimilarityMatrix sim = get_similarity(reduced, method, sim_cache, log);
    log.append("Similarity matrix shape: (" + std::to_string(sim.values.rows()) + ", " +
               std::to_string(sim.values.cols()) + ")");
    const double threshold = set_threshold(sim.values, cfg.threshold, log);
    return cluster_from_similarity(sim.values, reduced.n_rows(), threshold, cfg, log);
}

/// Runs every configured similarity method and returns (method, labels)
/// pairs in configuration order. Methods run concurrently when parallel
/// execution is enabled and the data is large enough; results are identical
/// either way.
inline std::vector<std::pair<SimilarityMethod, ClusterLabels>> cluster_all_methods(
    const DataMatrix& x, const SpinexConfig& cfg, SimilarityCache& sim_cache,
    preprocess::PcaCache& pca_cache, DecisionLog& log) {
    const auto& methods = cfg.similarity_methods;
    std::vector<std::pair<SimilarityMethod, ClusterLabels>> out(methods.size());
    const bool parallel = cfg.use_parallel && x.n_rows() >= cfg.parallel_threshold;
    if (parallel) {
        std::vector<std::future<ClusterLabels>> futures;
        futures.reserve(methods.size());
        for (SimilarityMethod m : methods) {
            futures.push_back(std::async(std::launch::async, [&, m] {
                return cluster_with_method(x, m, cfg, sim_cache, pca_cache, log);
            }));
        }
        for (std::size_t i = 0; i < methods.size(); ++i) {
            out[i] = {methods[i], futures[i].get()};
        }
    } else {
        for (std::size_t i = 0; i < methods.size(); ++i) {
            out[i] = {methods[i], cluster_with_method(x, methods[i], cfg, sim_cache, pca_cache, log)};
        }
    }
    return out;
}

}  // namespace spinex::engine
