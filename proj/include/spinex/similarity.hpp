#pragma once

// Observation-level similarity: matrix fingerprinting, the four similarity
// kernels (Pearson, Spearman, RBF, cosine) and the content-addressed cache.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/sha256.hpp"

namespace spinex {

using MatrixFingerprint = std::string;  // 64 lowercase hex chars

namespace detail {

inline void append_u64_le(Sha256& h, std::uint64_t v) {
    std::uint8_t bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
    h.update(bytes, 8);
}

inline void append_double_le(Sha256& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    append_u64_le(h, bits);
}

}  // namespace detail

/// SHA-256 over (n_rows, n_cols, row-major doubles), all little-endian;
/// doubles hashed by IEEE-754 bit pattern so -0.0 and 0.0 differ.
inline MatrixFingerprint fingerprint(const Matrix& m) {
    Sha256 h;
    detail::append_u64_le(h, m.rows());
    detail::append_u64_le(h, m.cols());
    for (double v : m.values()) detail::append_double_le(h, v);
    const auto digest = h.finish();
    return Sha256::hex(digest);
}

inline MatrixFingerprint fingerprint(const DataMatrix& m) { return fingerprint(m.grid()); }

/// Label vectors hash as an n x 1 matrix of int64 values widened to double.
inline MatrixFingerprint fingerprint_labels(std::span<const int> labels) {
    Sha256 h;
    detail::append_u64_le(h, labels.size());
    detail::append_u64_le(h, 1);
    for (int v : labels) detail::append_double_le(h, static_cast<double>(v));
    const auto digest = h.finish();
    return Sha256::hex(digest);
}

namespace detail {

/// Replaces non-finite entries (zero-variance rows under correlation) with
/// 0 off the diagonal and 1 on it. Returns whether anything was replaced.
inline bool sanitize_similarity(Matrix& s) {
    bool touched = false;
    const std::size_t n = s.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(s(i, j))) {
                s(i, j) = (i == j) ? 1.0 : 0.0;
                touched = true;
            }
        }
    }
    return touched;
}

/// Mirrors the strict upper triangle onto the lower one.
inline void symmetrize_from_upper(Matrix& s) {
    const std::size_t n = s.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            s(j, i) = s(i, j);
        }
    }
}

/// Midrank ranks of one row (ties share the average rank, 1-based).
inline std::vector<double> midranks(std::span<const double> row) {
    const std::size_t d = row.size();
    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<double> ranks(d, 0.0);
    std::size_t i = 0;
    while (i < d) {
        std::size_t j = i;
        while (j + 1 < d && row[order[j + 1]] == row[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline Matrix pearson_of_rows(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<double> mean(n), norm(n);
    Matrix centered(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        mean[i] = mean_of(x.row(i));
        double q = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double c = x(i, k) - mean[i];
            centered(i, k) = c;
            q += c * c;
        }
        norm[i] = std::sqrt(q);
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += centered(i, k) * centered(j, k);
            s(i, j) = dot / (norm[i] * norm[j]);  // 0/0 becomes NaN, sanitized later
        }
    }
    symmetrize_from_upper(s);
    return s;
}

}  // namespace detail

/// Pearson correlation between observation rows. Zero-variance rows yield
/// non-finite scores that are sanitized to 0 (1 on the diagonal); when that
/// happens and a log is supplied, the replacement is recorded.
inline SimilarityMatrix pearson_similarity(const DataMatrix& x, DecisionLog* log = nullptr) {
    Matrix s = detail::pearson_of_rows(x.grid());
    if (detail::sanitize_similarity(s) && log != nullptr) {
        log->append("Replaced non-finite correlation entries for zero-variance rows.");
    }
    return {std::move(s), SimilarityMethod::correlation};
}

/// Spearman rank correlation: Pearson over midranked rows.
inline SimilarityMatrix spearman_similarity(const DataMatrix& x, DecisionLog* log = nullptr) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    Matrix ranked(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ranks = detail::midranks(x.row(i));
        for (std::size_t k = 0; k < d; ++k) ranked(i, k) = ranks[k];
    }
    Matrix s = detail::pearson_of_rows(ranked);
    if (detail::sanitize_similarity(s) && log != nullptr) {
        log->append("Replaced non-finite rank-correlation entries for constant rows.");
    }
    return {std::move(s), SimilarityMethod::spearman};
}

/// RBF kernel exp(-gamma * ||xi - xj||^2); diagonal is exactly 1.
inline SimilarityMatrix rbf_similarity(const DataMatrix& x, double gamma = 1.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf_similarity: gamma must be positive");
    const std::size_t n = x.n_rows();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            s(i, j) = std::exp(-gamma * squared_distance(x.row(i), x.row(j)));
        }
    }
    detail::symmetrize_from_upper(s);
    return {std::move(s), SimilarityMethod::kernel};
}

/// Cosine similarity of observation rows. A zero-norm row scores 0 against
/// every other row and 1 against itself.
inline SimilarityMatrix cosine_similarity(const DataMatrix& x) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    std::vector<double> norm(n);
    for (std::size_t i = 0; i < n; ++i) {
        double q = 0.0;
        for (std::size_t k = 0; k < d; ++k) q += x(i, k) * x(i, k);
        norm[i] = std::sqrt(q);
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (norm[i] == 0.0 || norm[j] == 0.0) {
                s(i, j) = 0.0;
                continue;
            }
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += x(i, k) * x(j, k);
            s(i, j) = dot / (norm[i] * norm[j]);
        }
    }
    detail::symmetrize_from_upper(s);
    return {std::move(s), SimilarityMethod::cosine};
}

// ---------------------------------------------------------------------------
// SimilarityCache: (fingerprint, method) -> matrix, with hit/miss counters.
// Thread safe; stored matrices are returned by value so hits are bit-exact.
// ---------------------------------------------------------------------------
class SimilarityCache {
public:
    std::optional<SimilarityMatrix> find(const MatrixFingerprint& fp, SimilarityMethod m) const {
        std::scoped_lock lock(mu_);
        auto it = store_.find({fp, m});
        if (it == store_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }

    void insert(const MatrixFingerprint& fp, SimilarityMethod m, SimilarityMatrix sim) {
        std::scoped_lock lock(mu_);
        store_.insert_or_assign({fp, m}, std::move(sim));
    }

    std::size_t hits() const {
        std::scoped_lock lock(mu_);
        return hits_;
    }

    std::size_t misses() const {
        std::scoped_lock lock(mu_);
        return misses_;
    }

    std::size_t size() const {
        std::scoped_lock lock(mu_);
        return store_.size();
    }

private:
    mutable std::mutex mu_;
    mutable std::size_t hits_ = 0;
    mutable std::size_t misses_ = 0;
    std::map<std::pair<MatrixFingerprint, SimilarityMethod>, SimilarityMatrix> store_;
};

/// Cache-aware dispatch. Correlation-family methods on single-feature data
/// return an all-ones matrix without touching the cache (every pair of
/// one-feature rows is trivially correlated).
inline SimilarityMatrix get_similarity(const DataMatrix& x, SimilarityMethod method,
                                       SimilarityCache& cache, DecisionLog& log) {
    if (x.n_cols() < 2 && (method == SimilarityMethod::correlation ||
                           method == SimilarityMethod::spearman)) {
        Matrix ones(x.n_rows(), x.n_rows(), 1.0);
        return {std::move(ones), method};
    }
    const MatrixFingerprint fp = fingerprint(x);
    if (auto hit = cache.find(fp, method)) {
        log.append("Retrieved " + to_string(method) + " similarity matrix.");
        return *std::move(hit);
    }
    SimilarityMatrix sim;
    switch (method) {
        case SimilarityMethod::correlation: sim = pearson_similarity(x, &log); break;
        case SimilarityMethod::spearman: sim = spearman_similarity(x, &log); break;
        case SimilarityMethod::kernel: sim = rbf_similarity(x); break;
        case SimilarityMethod::cosine: sim = cosine_similarity(x); break;
        default: throw std::invalid_argument("Invalid similarity method: " + to_string(method));
    }
    cache.insert(fp, method, sim);
    log.append("Computed and cached " + to_string(method) + " similarity matrix.");
    return sim;
}

}  // namespace spinex
