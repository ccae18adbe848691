#pragma once

// Shared domain types for the spinex clustering library: numeric matrices,
// cluster labels, configuration, the decision log, and the seeded RNG that
// every stochastic operation draws from.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spinex {

class NotImplementedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Renders a double with the shortest representation that round-trips.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Matrix: a plain row-major grid with no invariants. Similarity values,
// distance matrices and condensed matrices live here.
// ---------------------------------------------------------------------------
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("Matrix: value count does not match shape");
        }
    }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// DataMatrix: n observations x d features of finite reals. Construction
// rejects empty shapes and non-finite entries.
// ---------------------------------------------------------------------------
class DataMatrix {
public:
    explicit DataMatrix(Matrix m) : m_(std::move(m)) { validate(); }

    DataMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<double> values)
        : m_(n_rows, n_cols, std::move(values)) {
        validate();
    }

    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw std::invalid_argument("DataMatrix: no rows");
        const std::size_t d = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * d);
        for (const auto& r : rows) {
            if (r.size() != d) throw std::invalid_argument("DataMatrix: ragged rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return DataMatrix(rows.size(), d, std::move(flat));
    }

    std::size_t n_rows() const { return m_.rows(); }
    std::size_t n_cols() const { return m_.cols(); }
    double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    std::span<const double> row(std::size_t r) const { return m_.row(r); }
    const Matrix& grid() const { return m_; }
    const std::vector<double>& values() const { return m_.values(); }

    bool operator==(const DataMatrix&) const = default;

private:
    void validate() const {
        if (m_.rows() < 1 || m_.cols() < 1) {
            throw std::invalid_argument("DataMatrix: shape must be at least 1x1");
        }
        for (double v : m_.values()) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("DataMatrix: entries must be finite");
            }
        }
    }

    Matrix m_;
};

// ---------------------------------------------------------------------------
// Similarity methods and matrices
// ---------------------------------------------------------------------------
enum class SimilarityMethod { correlation, spearman, kernel, cosine };

inline const std::vector<SimilarityMethod>& all_similarity_methods() {
    static const std::vector<SimilarityMethod> methods = {
        SimilarityMethod::correlation, SimilarityMethod::spearman,
        SimilarityMethod::kernel, SimilarityMethod::cosine};
    return methods;
}

inline std::string to_string(SimilarityMethod m) {
    switch (m) {
        case SimilarityMethod::correlation: return "correlation";
        case SimilarityMethod::spearman: return "spearman";
        case SimilarityMethod::kernel: return "kernel";
        case SimilarityMethod::cosine: return "cosine";
    }
    throw std::invalid_argument("unknown similarity method enum value");
}

inline SimilarityMethod similarity_method_from_string(std::string_view name) {
    for (SimilarityMethod m : all_similarity_methods()) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("Invalid similarity method: " + std::string(name));
}

/// n x n observation-similarity scores produced by one method.
struct SimilarityMatrix {
    Matrix values;
    SimilarityMethod method = SimilarityMethod::correlation;

    bool operator==(const SimilarityMatrix&) const = default;
};

// ---------------------------------------------------------------------------
// ClusterLabels: canonical length-n assignment.
// ---------------------------------------------------------------------------
struct ClusterLabels {
    std::vector<int> assignments;
    int n_clusters = 0;

    bool operator==(const ClusterLabels&) const = default;
};

/// Relabels so that first occurrences read 0,1,2,... while preserving the
/// partition structure. Idempotent.
inline ClusterLabels canonicalize_labels(std::span<const int> raw) {
    if (raw.empty()) throw std::invalid_argument("canonicalize_labels: empty input");
    std::unordered_map<int, int> remap;
    remap.reserve(raw.size());
    ClusterLabels out;
    out.assignments.reserve(raw.size());
    for (int v : raw) {
        auto [it, _] = remap.try_emplace(v, static_cast<int>(remap.size()));
        out.assignments.push_back(it->second);
    }
    out.n_clusters = static_cast<int>(remap.size());
    return out;
}

inline ClusterLabels canonicalize_labels(const std::vector<int>& raw) {
    return canonicalize_labels(std::span<const int>(raw));
}

// ---------------------------------------------------------------------------
// Threshold specification: auto | percentile(p) | fixed(v)
// ---------------------------------------------------------------------------
struct ThresholdSpec {
    enum class Kind { automatic, percentile, fixed };

    Kind kind = Kind::automatic;
    double value = 0.0;  // percentile p in (0,100) or the fixed threshold

    static ThresholdSpec automatic() { return {}; }

    static ThresholdSpec percentile(double p) {
        if (!(p > 0.0 && p < 100.0)) {
            throw std::invalid_argument("percentile threshold must lie in (0,100)");
        }
        return {Kind::percentile, p};
    }

    static ThresholdSpec fixed(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("fixed threshold must be finite");
        return {Kind::fixed, v};
    }

    /// Accepts "auto", "<p>%" or a plain number.
    static ThresholdSpec parse(std::string_view text) {
        if (text == "auto") return automatic();
        if (!text.empty() && text.back() == '%') {
            return percentile(parse_number(text.substr(0, text.size() - 1)));
        }
        return fixed(parse_number(text));
    }

    bool operator==(const ThresholdSpec&) const = default;

private:
    static double parse_number(std::string_view s) {
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw std::invalid_argument("Invalid threshold specified");
        }
        return v;
    }
};

struct MultiLevelParams {
    int levels = 3;
    double initial_threshold = 0.5;

    bool operator==(const MultiLevelParams&) const = default;
};

// ---------------------------------------------------------------------------
// PCA target: either an explicit component count or a variance fraction.
// ---------------------------------------------------------------------------
struct PcaTarget {
    bool is_count = true;
    std::size_t count = 0;
    double fraction = 0.0;

    static PcaTarget components(std::size_t r) {
        if (r < 1) throw std::invalid_argument("PCA component count must be positive");
        PcaTarget t;
        t.is_count = true;
        t.count = r;
        return t;
    }

    static PcaTarget variance(double f) {
        if (!(f > 0.0 && f < 1.0)) {
            throw std::invalid_argument("PCA variance fraction must lie in (0,1)");
        }
        PcaTarget t;
        t.is_count = false;
        t.fraction = f;
        return t;
    }

    bool operator==(const PcaTarget&) const = default;
};

enum class ApproximationMethod { random_sampling, pca, tsne, umap };

inline std::string to_string(ApproximationMethod m) {
    switch (m) {
        case ApproximationMethod::random_sampling: return "random_sampling";
        case ApproximationMethod::pca: return "pca";
        case ApproximationMethod::tsne: return "tsne";
        case ApproximationMethod::umap: return "umap";
    }
    throw std::invalid_argument("unknown approximation method enum value");
}

inline ApproximationMethod approximation_method_from_string(std::string_view name) {
    if (name == "random_sampling") return ApproximationMethod::random_sampling;
    if (name == "pca") return ApproximationMethod::pca;
    if (name == "tsne") return ApproximationMethod::tsne;
    if (name == "umap") return ApproximationMethod::umap;
    throw std::invalid_argument("Invalid approximation method: " + std::string(name));
}

// ---------------------------------------------------------------------------
// SpinexConfig: operational parameters of the clusterer.
// ---------------------------------------------------------------------------
struct SpinexConfig {
    ThresholdSpec threshold = ThresholdSpec::automatic();
    std::optional<std::size_t> n_clusters;
    bool use_pca = false;
    std::optional<PcaTarget> n_components;
    std::vector<SimilarityMethod> similarity_methods = all_similarity_methods();
    int evaluation_tier = 1;
    std::optional<std::vector<int>> ground_truth;
    bool use_approximation = false;
    ApproximationMethod approximation_method = ApproximationMethod::random_sampling;
    double sample_size = 0.5;
    bool use_parallel = false;
    std::size_t parallel_threshold = 5000;
    std::optional<unsigned> max_workers;
    bool use_multi_level = false;
    MultiLevelParams multi_level_params;
    std::size_t max_features = 100;
    bool enable_similarity_analysis = false;
    bool enable_neighbor_analysis = false;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (similarity_methods.empty()) {
            throw std::invalid_argument("similarity_methods must not be empty");
        }
        if (evaluation_tier < 1 || evaluation_tier > 3) {
            throw std::invalid_argument("evaluation_tier must be 1, 2 or 3");
        }
        if (!(sample_size > 0.0 && sample_size <= 1.0)) {
            throw std::invalid_argument("sample_size must lie in (0,1]");
        }
        if (multi_level_params.levels < 1) {
            throw std::invalid_argument("multi_level_params.levels must be >= 1");
        }
        if (!(multi_level_params.initial_threshold > 0.0 &&
              multi_level_params.initial_threshold <= 1.0)) {
            throw std::invalid_argument("multi_level_params.initial_threshold must lie in (0,1]");
        }
        if (max_features < 1) {
            throw std::invalid_argument("max_features must be positive");
        }
        if (parallel_threshold < 1) {
            throw std::invalid_argument("parallel_threshold must be positive");
        }
    }
};

// ---------------------------------------------------------------------------
// DecisionLog: append-only trace of algorithmic choices. Appends are atomic;
// entry order across concurrent workers is unspecified but stable once
// written.
// ---------------------------------------------------------------------------
struct LogEntry {
    std::chrono::system_clock::time_point when;
    std::string message;
};

class DecisionLog {
public:
    DecisionLog() = default;

    DecisionLog(const DecisionLog& other) { entries_ = other.entries(); }
    DecisionLog& operator=(const DecisionLog& other) {
        if (this != &other) {
            auto copy = other.entries();
            std::scoped_lock lock(mu_);
            entries_ = std::move(copy);
        }
        return *this;
    }

    void append(std::string message) {
        LogEntry e{std::chrono::system_clock::now(), std::move(message)};
        std::scoped_lock lock(mu_);
        entries_.push_back(std::move(e));
    }

    std::vector<LogEntry> entries() const {
        std::scoped_lock lock(mu_);
        return entries_;
    }

    std::vector<std::string> messages() const {
        std::scoped_lock lock(mu_);
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.message);
        return out;
    }

    bool contains(std::string_view needle) const {
        std::scoped_lock lock(mu_);
        return std::any_of(entries_.begin(), entries_.end(), [&](const LogEntry& e) {
            return e.message.find(needle) != std::string::npos;
        });
    }

    std::size_t size() const {
        std::scoped_lock lock(mu_);
        return entries_.size();
    }

private:
    mutable std::mutex mu_;
    std::vector<LogEntry> entries_;
};

// ---------------------------------------------------------------------------
// Rng: seeded generator with hand-rolled distributions so that identical
// seeds give identical streams on every standard library.
// ---------------------------------------------------------------------------
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Uniform integer in [0,n) without modulo bias.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = span - span % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

    /// k distinct indices from [0,n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_index(n - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules.
// ---------------------------------------------------------------------------
inline double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Population variance (ddof = 0).
inline double population_variance(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

inline double population_stddev(std::span<const double> xs) {
    return std::sqrt(population_variance(xs));
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

}  // namespace spinex
