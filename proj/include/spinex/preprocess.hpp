#pragma once

// Preprocessing: standardization, PCA (dense Jacobi eigensolver on the
// sample covariance), random subsampling and the feature-count guard used
// ahead of clustering.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/similarity.hpp"

namespace spinex::preprocess {

/// Column-wise zero mean, unit population standard deviation. Zero-variance
/// columns map to all zeros.
inline DataMatrix standardize(const DataMatrix& x) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x(i, j);
        mean[j] = s / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < d; ++j) {
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = x(i, j) - mean[j];
            q += c * c;
        }
        sd[j] = std::sqrt(q / static_cast<double>(n));
    }
    std::vector<double> out(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out[i * d + j] = (sd[j] == 0.0) ? 0.0 : (x(i, j) - mean[j]) / sd[j];
        }
    }
    return DataMatrix(n, d, std::move(out));
}

namespace detail {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Outputs eigenpairs
/// sorted by descending eigenvalue; eigenvectors are the columns of `vecs`.
inline void jacobi_eigen_symmetric(Matrix a, std::vector<double>& vals, Matrix& vecs) {
    const std::size_t n = a.rows();
    vecs = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) vecs(i, i) = 1.0;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) diag += a(i, i) * a(i, i);
        if (off <= 1e-24 * std::max(diag, 1.0)) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vecs(k, p);
                    const double vkq = vecs(k, q);
                    vecs(k, p) = c * vkp - s * vkq;
                    vecs(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    vals.resize(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return vals[l] > vals[r]; });
    std::vector<double> sorted_vals(n);
    Matrix sorted_vecs(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        sorted_vals[c] = vals[order[c]];
        for (std::size_t r = 0; r < n; ++r) sorted_vecs(r, c) = vecs(r, order[c]);
    }
    vals = std::move(sorted_vals);
    vecs = std::move(sorted_vecs);
}

}  // namespace detail

struct PcaModel {
    std::vector<double> mean;                 // d
    Matrix components;                        // d x r, orthonormal columns
    std::vector<double> explained_variance;   // r eigenvalues, non-increasing

    std::size_t n_components() const { return components.cols(); }

    std::vector<double> explained_variance_ratio() const {
        double total = 0.0;
        for (double v : all_variance) total += v;
        std::vector<double> out(explained_variance.size(), 0.0);
        if (total > 0.0) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = explained_variance[i] / total;
        }
        return out;
    }

    std::vector<double> all_variance;  // full eigenvalue spectrum
};

/// Fits PCA on the sample covariance (1/(n-1)). `target` selects either an
/// explicit component count (must satisfy r <= min(n-1, d)) or the smallest
/// count whose cumulative variance ratio reaches the requested fraction.
/// Eigenvalues below zero are clamped to zero; each component is signed so
/// its largest-magnitude entry is positive.
inline PcaModel fit_pca(const DataMatrix& x, PcaTarget target) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    if (n < 2) throw std::invalid_argument("fit_pca: need at least two observations");

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x(i, j);
        model.mean[j] = s / static_cast<double>(n);
    }

    Matrix cov(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += (x(i, a) - model.mean[a]) * (x(i, b) - model.mean[b]);
            }
            const double v = s / static_cast<double>(n - 1);
            cov(a, b) = v;
            cov(b, a) = v;
        }
    }

    std::vector<double> vals;
    Matrix vecs;
    detail::jacobi_eigen_symmetric(std::move(cov), vals, vecs);
    for (double& v : vals) v = std::max(v, 0.0);

    std::size_t r;
    const std::size_t r_max = std::min(n - 1, d);
    if (target.is_count) {
        if (target.count > r_max) {
            throw std::invalid_argument("fit_pca: component count exceeds min(n-1, d)");
        }
        r = target.count;
    } else {
        double total = 0.0;
        for (double v : vals) total += v;
        r = 1;
        if (total > 0.0) {
            double cum = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                cum += vals[i];
                if (cum / total >= target.fraction) {
                    r = i + 1;
                    break;
                }
                r = i + 1;
            }
        }
        r = std::min(r, r_max);
        r = std::max<std::size_t>(r, 1);
    }

    model.components = Matrix(d, r);
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double mag = std::abs(vecs(k, c));
            if (mag > best) {
                best = mag;
                arg = k;
            }
        }
        const double sign = (vecs(arg, c) < 0.0) ? -1.0 : 1.0;
        for (std::size_t k = 0; k < d; ++k) model.components(k, c) = sign * vecs(k, c);
    }
    model.explained_variance.assign(vals.begin(), vals.begin() + static_cast<long>(r));
    model.all_variance = std::move(vals);
    return model;
}

/// Projects rows onto the fitted components: (x - mean) W.
inline DataMatrix transform_pca(const PcaModel& model, const DataMatrix& x) {
    const std::size_t n = x.n_rows();
    const std::size_t d = x.n_cols();
    if (d != model.mean.size()) {
        throw std::invalid_argument("transform_pca: feature count does not match the model");
    }
    const std::size_t r = model.n_components();
    std::vector<double> out(n * r, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < r; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                s += (x(i, k) - model.mean[k]) * model.components(k, c);
            }
            out[i * r + c] = s;
        }
    }
    return DataMatrix(n, r, std::move(out));
}

/// floor(n * sample_size) distinct rows, drawn without replacement.
/// Returns the reduced matrix together with the chosen row indices in draw
/// order. Throws when the sample would be empty.
inline std::pair<DataMatrix, std::vector<std::size_t>> random_sample(const DataMatrix& x,
                                                                     double sample_size, Rng& rng,
                                                                     DecisionLog* log = nullptr) {
    if (!(sample_size > 0.0 && sample_size <= 1.0)) {
        throw std::invalid_argument("random_sample: sample_size must lie in (0,1]");
    }
    const std::size_t n = x.n_rows();
    const auto k = static_cast<std::size_t>(static_cast<double>(n) * sample_size);
    if (k == 0) throw std::invalid_argument("random_sample: sample would be empty");
    auto idx = rng.sample_without_replacement(n, k);
    const std::size_t d = x.n_cols();
    std::vector<double> out;
    out.reserve(k * d);
    for (std::size_t i : idx) {
        const auto row = x.row(i);
        out.insert(out.end(), row.begin(), row.end());
    }
    if (log != nullptr) {
        log->append("Data reduced to " + std::to_string(k) + " samples using random sampling.");
    }
    return {DataMatrix(k, d, std::move(out)), std::move(idx)};
}

/// Caps the feature count ahead of clustering. Wide inputs are projected
/// with PCA fitted on the raw (unstandardized) data; the effective component
/// count is clamped to min(max_features, n-1) so the projection is always
/// well defined.
inline DataMatrix enforce_max_features(const DataMatrix& x, std::size_t max_features,
                                       DecisionLog& log) {
    if (max_features < 1) throw std::invalid_argument("enforce_max_features: cap must be positive");
    const std::size_t d = x.n_cols();
    if (d <= max_features) return x;
    log.append("Reducing features from " + std::to_string(d) + " to " +
               std::to_string(max_features) + " using PCA");
    const std::size_t n = x.n_rows();
    std::size_t r = std::min(max_features, n - 1);
    r = std::max<std::size_t>(r, 1);
    if (r != max_features) {
        log.append("Feature cap clamped to " + std::to_string(r) +
                   " components (limited by sample count).");
    }
    const PcaModel model = fit_pca(x, PcaTarget::components(r));
    return transform_pca(model, x);
}

// ---------------------------------------------------------------------------
// PcaCache: fingerprint of the standardized input -> projected data.
// ---------------------------------------------------------------------------
class PcaCache {
public:
    std::optional<DataMatrix> find(const MatrixFingerprint& fp) const {
        std::scoped_lock lock(mu_);
        auto it = store_.find(fp);
        if (it == store_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }

    void insert(const MatrixFingerprint& fp, DataMatrix value) {
        std::scoped_lock lock(mu_);
        store_.insert_or_assign(fp, std::move(value));
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
    std::map<MatrixFingerprint, DataMatrix> store_;
};

/// Standardizes then projects when use_pca is set; otherwise passes the data
/// through untouched. Projections are cached by the fingerprint of the
/// standardized matrix. Without an explicit n_components the smallest count
/// explaining 95% of the variance is used.
inline DataMatrix apply_pca(const DataMatrix& x, const SpinexConfig& cfg, PcaCache& cache,
                            DecisionLog& log) {
    if (!cfg.use_pca) return x;
    const DataMatrix scaled = standardize(x);
    const MatrixFingerprint fp = fingerprint(scaled);
    if (auto hit = cache.find(fp)) {
        log.append("Retrieved PCA results.");
        return *std::move(hit);
    }
    const PcaTarget target = cfg.n_components.value_or(PcaTarget::variance(0.95));
    const PcaModel model = fit_pca(scaled, target);
    DataMatrix reduced = transform_pca(model, scaled);
    cache.insert(fp, reduced);
    log.append("Computed and cached PCA results. Reduced dimensions to " +
               std::to_string(model.n_components()) + ".");
    return reduced;
}

/// Standalone data-reduction step: random row subsampling or a PCA
/// projection, selected by cfg.approximation_method. The t-SNE and UMAP
/// settings are recognized but deliberately unimplemented.
inline DataMatrix apply_approximation(const DataMatrix& x, const SpinexConfig& cfg, Rng& rng,
                                      DecisionLog& log) {
    if (!cfg.use_approximation) return x;
    switch (cfg.approximation_method) {
        case ApproximationMethod::random_sampling:
            return random_sample(x, cfg.sample_size, rng, &log).first;
        case ApproximationMethod::pca: {
            const PcaTarget target = cfg.n_components.value_or(PcaTarget::variance(0.95));
            const PcaModel model = fit_pca(x, target);
            DataMatrix reduced = transform_pca(model, x);
            log.append("Data reduced to " + std::to_string(model.n_components()) +
                       " dimensions using PCA.");
            return reduced;
        }
        case ApproximationMethod::tsne:
        case ApproximationMethod::umap:
            throw NotImplementedError("approximation method not implemented: " +
                                      to_string(cfg.approximation_method));
    }
    throw std::invalid_argument("unknown approximation method");
}

}  // namespace spinex::preprocess
