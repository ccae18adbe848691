#pragma once

// Seeded synthetic dataset generators mirroring the benchmark's 33 scenario
// rows, plus CSV import/export. Every generator is deterministic in its
// seed. Table cells left unspecified default to 300 samples, 2 features,
// zero noise and a (-10,10) center box.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/preprocess.hpp"

namespace spinex::datasets {

struct LabeledDataset {
    std::string name;
    DataMatrix x;
    std::optional<ClusterLabels> truth;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
};

namespace detail {

inline constexpr double pi = std::numbers::pi;

inline std::vector<std::size_t> balanced_counts(std::size_t n, std::size_t k) {
    std::vector<std::size_t> counts(k, n / k);
    for (std::size_t c = 0; c < n % k; ++c) ++counts[c];
    return counts;
}

inline std::vector<std::vector<double>> random_centers(std::size_t k, std::size_t d, double lo,
                                                       double hi, Rng& rng) {
    std::vector<std::vector<double>> centers(k, std::vector<double>(d, 0.0));
    for (auto& c : centers) {
        for (double& v : c) v = rng.uniform(lo, hi);
    }
    return centers;
}

inline LabeledDataset finish(std::string name, std::size_t d, std::vector<double> values,
                             std::optional<std::vector<int>> truth, std::uint64_t seed,
                             std::map<std::string, std::string> params) {
    const std::size_t n = values.size() / d;
    std::optional<ClusterLabels> labels;
    if (truth) labels = canonicalize_labels(*truth);
    return LabeledDataset{std::move(name), DataMatrix(n, d, std::move(values)),
                          std::move(labels), seed, std::move(params)};
}

}  // namespace detail

/// Isotropic Gaussian blobs around explicit centers with per-center spread.
/// Point counts are balanced to within one and laid out in consecutive
/// blocks per center; truth is the center index.
inline LabeledDataset make_blobs_at(std::string name, std::size_t n,
                                    const std::vector<std::vector<double>>& centers,
                                    const std::vector<double>& stds, std::uint64_t seed, Rng& rng,
                                    std::map<std::string, std::string> params = {}) {
    const std::size_t k = centers.size();
    if (k < 1 || n < k) throw std::invalid_argument("make_blobs: need n >= centers >= 1");
    if (stds.size() != k) throw std::invalid_argument("make_blobs: std list length mismatch");
    const std::size_t d = centers.front().size();
    const auto counts = detail::balanced_counts(n, k);
    std::vector<double> values;
    values.reserve(n * d);
    std::vector<int> truth;
    truth.reserve(n);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            for (std::size_t f = 0; f < d; ++f) {
                values.push_back(centers[c][f] + stds[c] * rng.normal());
            }
            truth.push_back(static_cast<int>(c));
        }
    }
    return detail::finish(std::move(name), d, std::move(values), std::move(truth), seed,
                          std::move(params));
}

/// Blobs with centers drawn uniformly from center_box^d.
inline LabeledDataset make_blobs(std::size_t n, std::size_t d, std::size_t centers,
                                 std::vector<double> stds, std::uint64_t seed,
                                 std::pair<double, double> center_box = {-10.0, 10.0},
                                 std::string name = "Blobs") {
    if (stds.size() == 1) stds.assign(centers, stds.front());
    Rng rng(seed);
    const auto points = detail::random_centers(centers, d, center_box.first, center_box.second, rng);
    std::map<std::string, std::string> params{{"centers", std::to_string(centers)},
                                              {"center_box_low", format_double(center_box.first)},
                                              {"center_box_high", format_double(center_box.second)}};
    return make_blobs_at(std::move(name), n, points, stds, seed, rng, std::move(params));
}

inline LabeledDataset make_blobs(std::size_t n, std::size_t d, std::size_t centers, double stddev,
                                 std::uint64_t seed,
                                 std::pair<double, double> center_box = {-10.0, 10.0},
                                 std::string name = "Blobs") {
    return make_blobs(n, d, centers, std::vector<double>{stddev}, seed, center_box,
                      std::move(name));
}

/// Two interleaving half circles: upper arc (cos t, sin t) and lower arc
/// (1 - cos t, 0.5 - sin t) over an inclusive uniform grid on [0, pi], plus
/// Gaussian jitter. Truth is the arc id.
inline LabeledDataset make_moons(std::size_t n, double noise, std::uint64_t seed,
                                 std::string name = "Moons") {
    if (n < 2) throw std::invalid_argument("make_moons: need n >= 2");
    Rng rng(seed);
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    std::vector<double> values;
    values.reserve(n * 2);
    std::vector<int> truth;
    truth.reserve(n);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = detail::pi * static_cast<double>(i) /
                         static_cast<double>(std::max<std::size_t>(n_out - 1, 1));
        values.push_back(std::cos(t) + noise * rng.normal());
        values.push_back(std::sin(t) + noise * rng.normal());
        truth.push_back(0);
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        const double t = detail::pi * static_cast<double>(i) /
                         static_cast<double>(std::max<std::size_t>(n_in - 1, 1));
        values.push_back(1.0 - std::cos(t) + noise * rng.normal());
        values.push_back(0.5 - std::sin(t) + noise * rng.normal());
        truth.push_back(1);
    }
    return detail::finish(std::move(name), 2, std::move(values), std::move(truth), seed,
                          {{"noise", format_double(noise)}});
}

/// A large circle containing a smaller one (radius ratio `factor`), with
/// angles on a uniform grid and Gaussian jitter.
inline LabeledDataset make_circles(std::size_t n, double noise, std::uint64_t seed,
                                   double factor = 0.5, std::string name = "Circles") {
    if (n < 2) throw std::invalid_argument("make_circles: need n >= 2");
    if (!(factor > 0.0 && factor < 1.0)) {
        throw std::invalid_argument("make_circles: factor must lie in (0,1)");
    }
    Rng rng(seed);
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    std::vector<double> values;
    values.reserve(n * 2);
    std::vector<int> truth;
    truth.reserve(n);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = 2.0 * detail::pi * static_cast<double>(i) / static_cast<double>(n_out);
        values.push_back(std::cos(t) + noise * rng.normal());
        values.push_back(std::sin(t) + noise * rng.normal());
        truth.push_back(0);
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        const double t = 2.0 * detail::pi * static_cast<double>(i) / static_cast<double>(n_in);
        values.push_back(factor * std::cos(t) + noise * rng.normal());
        values.push_back(factor * std::sin(t) + noise * rng.normal());
        truth.push_back(1);
    }
    return detail::finish(std::move(name), 2, std::move(values), std::move(truth), seed,
                          {{"noise", format_double(noise)}, {"factor", format_double(factor)}});
}

namespace detail {

inline LabeledDataset make_anisotropic(std::uint64_t seed) {
    LabeledDataset base = make_blobs(400, 6, 3, std::vector<double>{0.5, 1.5, 0.5}, seed,
                                     {-10.0, 10.0}, "Anisotropic");
    // fixed shear on the first two features
    const double t00 = 0.6, t01 = -0.6, t10 = -0.4, t11 = 0.8;
    std::vector<double> values = base.x.values();
    const std::size_t d = base.x.n_cols();
    for (std::size_t i = 0; i < base.x.n_rows(); ++i) {
        const double a = values[i * d];
        const double b = values[i * d + 1];
        values[i * d] = t00 * a + t10 * b;
        values[i * d + 1] = t01 * a + t11 * b;
    }
    base.x = DataMatrix(base.x.n_rows(), d, std::move(values));
    return base;
}

inline LabeledDataset make_broken_rings(std::uint64_t seed) {
    const std::size_t n = 300;
    const double noise = 0.1;
    Rng rng(seed);
    const std::vector<double> radii = {1.0, 2.0, 3.0};
    const auto counts = balanced_counts(n, radii.size());
    std::vector<double> values;
    values.reserve(n * 2);
    std::vector<int> truth;
    for (std::size_t r = 0; r < radii.size(); ++r) {
        // each ring covers a 270-degree arc, rotated per ring
        const double start = 0.5 * pi * static_cast<double>(r);
        for (std::size_t i = 0; i < counts[r]; ++i) {
            const double t = start + 1.5 * pi * rng.uniform();
            values.push_back(radii[r] * std::cos(t) + noise * rng.normal());
            values.push_back(radii[r] * std::sin(t) + noise * rng.normal());
            truth.push_back(static_cast<int>(r));
        }
    }
    return finish("Broken Rings", 2, std::move(values), std::move(truth), seed,
                  {{"noise", format_double(noise)}});
}

inline LabeledDataset make_checkerboard(std::uint64_t seed) {
    const std::size_t n = 300;
    const std::size_t grid = 9;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    std::vector<int> truth;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, static_cast<double>(grid));
        const double y = rng.uniform(0.0, static_cast<double>(grid));
        values.push_back(x);
        values.push_back(y);
        const auto cx = static_cast<std::size_t>(x);
        const auto cy = static_cast<std::size_t>(y);
        truth.push_back(static_cast<int>((cx + cy) % 2));
    }
    return finish("Checkerboard", 2, std::move(values), std::move(truth), seed,
                  {{"grid", std::to_string(grid)}});
}

inline LabeledDataset make_concentric_spheres(std::uint64_t seed) {
    const std::size_t n = 300;
    const double noise = 0.02;
    Rng rng(seed);
    const std::vector<double> scales = {1.0, 2.0, 3.0};
    const auto counts = balanced_counts(n, scales.size());
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t r = 0; r < scales.size(); ++r) {
        for (std::size_t i = 0; i < counts[r]; ++i) {
            const double t = 2.0 * pi * rng.uniform();
            values.push_back(scales[r] * std::cos(t) + noise * rng.normal());
            values.push_back(scales[r] * std::sin(t) + noise * rng.normal());
            truth.push_back(static_cast<int>(r));
        }
    }
    return finish("Concentric Spheres", 2, std::move(values), std::move(truth), seed,
                  {{"noise", format_double(noise)}});
}

inline LabeledDataset make_disjoint(std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::vector<double>> centers = {{-20.0, -20.0}, {0.0, 20.0}, {20.0, -10.0}};
    return make_blobs_at("Disjoint Clusters", 300, centers, {1.0, 1.0, 1.0}, seed, rng);
}

inline LabeledDataset make_feature_entanglement(std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t i = 0; i < n; ++i) {
        const int a = rng.uniform() < 0.5 ? 0 : 1;
        const int b = rng.uniform() < 0.5 ? 0 : 1;
        values.push_back(static_cast<double>(a) + 0.1 * rng.normal());
        values.push_back(static_cast<double>(b) + 0.1 * rng.normal());
        truth.push_back(a ^ b);
    }
    return finish("Feature Entanglement", 2, std::move(values), std::move(truth), seed, {});
}

inline LabeledDataset make_friedman(std::uint64_t seed) {
    const std::size_t n = 1000;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 6);
    for (std::size_t i = 0; i < n; ++i) {
        double x[5];
        for (double& v : x) v = rng.uniform();
        const double y = 10.0 * std::sin(pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
                         10.0 * x[3] + 5.0 * x[4];
        for (double v : x) values.push_back(v);
        values.push_back(y);
    }
    return finish("Friedman's Function", 6, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_hierarchical(std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::vector<double>> centers = {
        {0.0, 0.0, 0.0}, {5.0, 5.0, 5.0}, {-5.0, 5.0, 0.0}, {5.0, -5.0, 2.5}};
    const std::vector<double> stds = {0.5, 1.0, 0.3, 0.8};
    const std::vector<std::size_t> counts = {100, 90, 60, 80};
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            for (std::size_t f = 0; f < 3; ++f) {
                values.push_back(centers[c][f] + stds[c] * rng.normal());
            }
            truth.push_back(static_cast<int>(c));
        }
    }
    return finish("Hierarchical Clusters", 3, std::move(values), std::move(truth), seed, {});
}

inline LabeledDataset make_highly_correlated(std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = rng.normal();
        values.push_back(base);
        values.push_back(base + 0.1 * rng.normal());
    }
    return finish("Highly Correlated Features", 2, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_nested(std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::vector<double>> centers = {{0.0, 0.0}, {1.0, 1.0}, {4.0, 4.0}};
    return make_blobs_at("Nested Clusters", 350, centers, {0.5, 0.2, 0.3}, seed, rng);
}

inline LabeledDataset make_no_structure(std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    for (std::size_t i = 0; i < 2 * n; ++i) values.push_back(rng.uniform());
    return finish("No structure", 2, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_periodic(std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    const std::size_t segments = 4;
    const auto counts = balanced_counts(n, segments);
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t i = 0; i < counts[s]; ++i) {
            const double t = 0.8 * rng.uniform();
            values.push_back(static_cast<double>(s) + t + 0.05 * rng.normal());
            values.push_back(t + 0.05 * rng.normal());
            truth.push_back(static_cast<int>(s));
        }
    }
    return finish("Periodic Patterns", 2, std::move(values), std::move(truth), seed, {});
}

inline LabeledDataset make_uniform_scatter(std::uint64_t seed) {
    const std::size_t n = 1000;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    for (std::size_t i = 0; i < 2 * n; ++i) values.push_back(100.0 * rng.uniform());
    return finish("Random Uniform Scatter", 2, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_random_walk(std::uint64_t seed) {
    const std::size_t n = 1000;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    double x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x += rng.normal();
        y += rng.normal();
        values.push_back(x);
        values.push_back(y);
    }
    return finish("Random Walk Clusters", 2, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_shifting_variance(std::uint64_t seed) {
    return make_blobs(300, 2, 3, std::vector<double>{0.5, 1.0, 1.5}, seed, {-10.0, 10.0},
                      "Shifting Variance Clusters");
}

inline LabeledDataset make_sine_wave(std::uint64_t seed) {
    const std::size_t n = 200;
    const double noise = 0.1;
    Rng rng(seed);
    const auto counts = balanced_counts(n, 2);
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            const double t = 2.0 * pi * rng.uniform();
            values.push_back(t + noise * rng.normal());
            values.push_back(std::sin(t) + 2.0 * static_cast<double>(c) + noise * rng.normal());
            truth.push_back(static_cast<int>(c));
        }
    }
    return finish("Sine Wave Clusters", 2, std::move(values), std::move(truth), seed,
                  {{"noise", format_double(noise)}});
}

inline LabeledDataset make_sparse_high_dimensional(std::uint64_t seed) {
    const std::size_t n = 200;
    const std::size_t d = 100;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * d);
    for (std::size_t i = 0; i < n * d; ++i) {
        values.push_back(rng.uniform() < 0.05 ? 1.0 : 0.0);
    }
    return finish("Sparse High-Dimensional", d, std::move(values), std::nullopt, seed, {});
}

inline LabeledDataset make_spirals(std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    const auto counts = balanced_counts(n, 2);
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t c = 0; c < 2; ++c) {
        const double phase = pi * static_cast<double>(c);
        for (std::size_t i = 0; i < counts[c]; ++i) {
            const double t = 0.5 + 2.5 * pi * rng.uniform();
            values.push_back(t * std::cos(t + phase) + 0.1 * rng.normal());
            values.push_back(t * std::sin(t + phase) + 0.1 * rng.normal());
            truth.push_back(static_cast<int>(c));
        }
    }
    return finish("Spirals", 2, std::move(values), std::move(truth), seed, {});
}

inline LabeledDataset make_swiss_roll(std::string name, double noise, std::uint64_t seed) {
    const std::size_t n = 300;
    Rng rng(seed);
    std::vector<double> values;
    values.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 1.5 * pi * (1.0 + 2.0 * rng.uniform());
        values.push_back(t * std::cos(t) + noise * rng.normal());
        values.push_back(t * std::sin(t) + noise * rng.normal());
    }
    return finish(std::move(name), 2, std::move(values), std::nullopt, seed,
                  {{"noise", format_double(noise)}});
}

inline LabeledDataset make_winding(std::uint64_t seed) {
    const std::size_t n = 200;
    Rng rng(seed);
    const auto counts = balanced_counts(n, 2);
    std::vector<double> values;
    std::vector<int> truth;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            const double t = 4.0 * pi * rng.uniform();
            values.push_back(t + 0.1 * rng.normal());
            values.push_back(0.25 * t * std::sin(t) + 3.0 * static_cast<double>(c) +
                             0.1 * rng.normal());
            truth.push_back(static_cast<int>(c));
        }
    }
    return finish("Winding Function Clusters", 2, std::move(values), std::move(truth), seed, {});
}

}  // namespace detail

inline const std::vector<std::string>& dataset_names() {
    static const std::vector<std::string> names = {
        "Aggregated Clusters", "Anisotropic", "Blobs", "Broken Rings", "Checkerboard", "Circles",
        "Concentric Spheres", "Disjoint Clusters", "Feature Entanglement", "Friedman's Function",
        "Gaussian Mixture", "Hierarchical Clusters", "High Dimensional Blobs",
        "Highly Correlated Features", "Interlocking Moons", "Manifold Learning Dataset", "Moons",
        "Nested Clusters", "No structure", "Non-spherical Gaussian Mixture", "Overlapping Circles",
        "Periodic Patterns", "Random Uniform Scatter", "Random Walk Clusters",
        "Shifting Variance Clusters", "Simple Blobs", "Sine Wave Clusters",
        "Sparse High-Dimensional", "Spirals", "Stretched Blobs", "Swiss Roll", "Varied Density",
        "Winding Function Clusters"};
    return names;
}

/// Builds one of the named benchmark datasets with its documented parameters.
inline LabeledDataset make_named(const std::string& name, std::uint64_t seed) {
    if (name == "Aggregated Clusters") return make_blobs(300, 2, 8, 0.3, seed, {-10.0, 10.0}, name);
    if (name == "Anisotropic") return detail::make_anisotropic(seed);
    if (name == "Blobs") return make_blobs(100, 4, 4, 1.0, seed, {-10.0, 10.0}, name);
    if (name == "Broken Rings") return detail::make_broken_rings(seed);
    if (name == "Checkerboard") return detail::make_checkerboard(seed);
    if (name == "Circles") return make_circles(250, 0.05, seed, 0.5, name);
    if (name == "Concentric Spheres") return detail::make_concentric_spheres(seed);
    if (name == "Disjoint Clusters") return detail::make_disjoint(seed);
    if (name == "Feature Entanglement") return detail::make_feature_entanglement(seed);
    if (name == "Friedman's Function") return detail::make_friedman(seed);
    if (name == "Gaussian Mixture") {
        return make_blobs(500, 3, 5, std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5}, seed,
                          {-10.0, 10.0}, name);
    }
    if (name == "Hierarchical Clusters") return detail::make_hierarchical(seed);
    if (name == "High Dimensional Blobs") {
        return make_blobs(300, 10, 5, 1.0, seed, {-10.0, 10.0}, name);
    }
    if (name == "Highly Correlated Features") return detail::make_highly_correlated(seed);
    if (name == "Interlocking Moons") return make_moons(800, 0.2, seed, name);
    if (name == "Manifold Learning Dataset") return detail::make_swiss_roll(name, 0.1, seed);
    if (name == "Moons") return make_moons(200, 0.1, seed, name);
    if (name == "Nested Clusters") return detail::make_nested(seed);
    if (name == "No structure") return detail::make_no_structure(seed);
    if (name == "Non-spherical Gaussian Mixture") {
        return make_blobs(300, 2, 3, std::vector<double>{1.0, 2.0, 3.0}, seed, {-10.0, 10.0},
                          name);
    }
    if (name == "Overlapping Circles") return make_circles(500, 0.1, seed, 0.8, name);
    if (name == "Periodic Patterns") return detail::make_periodic(seed);
    if (name == "Random Uniform Scatter") return detail::make_uniform_scatter(seed);
    if (name == "Random Walk Clusters") return detail::make_random_walk(seed);
    if (name == "Shifting Variance Clusters") return detail::make_shifting_variance(seed);
    if (name == "Simple Blobs") return make_blobs(300, 2, 4, 1.0, seed, {-10.0, 10.0}, name);
    if (name == "Sine Wave Clusters") return detail::make_sine_wave(seed);
    if (name == "Sparse High-Dimensional") return detail::make_sparse_high_dimensional(seed);
    if (name == "Spirals") return detail::make_spirals(seed);
    if (name == "Stretched Blobs") {
        return make_blobs(300, 2, 3, 0.5, seed, {20.0, 100.0}, name);
    }
    if (name == "Swiss Roll") return detail::make_swiss_roll(name, 0.1, seed);
    if (name == "Varied Density") {
        return make_blobs(100, 12, 3, std::vector<double>{1.0, 2.5, 0.5}, seed, {-10.0, 10.0},
                          name);
    }
    if (name == "Winding Function Clusters") return detail::make_winding(seed);
    throw std::invalid_argument("Unknown dataset name: " + name);
}

// ---------------------------------------------------------------------------
// CSV import/export. Dialect: comma separator, header required, '.' decimal
// point, UTF-8.
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::optional<double> parse_cell(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Loads a CSV file. Columns whose cells are all non-numeric are excluded
/// from the features; a column mixing numeric and non-numeric (or
/// non-finite) cells is an error naming the offending row and column. The
/// optional label column is excluded from the features and encoded in
/// first-occurrence order as the ground truth.
inline LabeledDataset load_csv(const std::string& path,
                               const std::optional<std::string>& label_column = std::nullopt,
                               bool standardize_features = false) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("load_csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = detail::split_csv_line(line);
    const std::size_t n_cols = header.size();

    std::optional<std::size_t> label_idx;
    if (label_column) {
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (detail::trim(header[j]) == *label_column) {
                label_idx = j;
                break;
            }
        }
        if (!label_idx) {
            throw std::invalid_argument("load_csv: unknown label column: " + *label_column);
        }
    }

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != n_cols) {
            throw std::invalid_argument("load_csv: row " + std::to_string(rows.size() + 1) +
                                        " has " + std::to_string(cells.size()) +
                                        " cells, expected " + std::to_string(n_cols));
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw std::invalid_argument("load_csv: no data rows in " + path);

    // classify feature columns: fully numeric kept, fully non-numeric
    // dropped, mixed or non-finite rejected
    std::vector<std::size_t> feature_cols;
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (label_idx && j == *label_idx) continue;
        std::size_t numeric = 0;
        for (const auto& row : rows) {
            if (detail::parse_cell(row[j])) ++numeric;
        }
        if (numeric == rows.size()) {
            feature_cols.push_back(j);
        } else if (numeric != 0) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!detail::parse_cell(rows[i][j])) {
                    throw std::invalid_argument(
                        "load_csv: non-numeric cell at row " + std::to_string(i + 1) +
                        ", column '" + detail::trim(header[j]) + "'");
                }
            }
        }
    }
    if (feature_cols.empty()) {
        throw std::invalid_argument("load_csv: no numeric feature columns in " + path);
    }

    std::vector<double> values;
    values.reserve(rows.size() * feature_cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j : feature_cols) {
            const double v = *detail::parse_cell(rows[i][j]);
            if (!std::isfinite(v)) {
                throw std::invalid_argument("load_csv: non-finite value at row " +
                                            std::to_string(i + 1) + ", column '" +
                                            detail::trim(header[j]) + "'");
            }
            values.push_back(v);
        }
    }

    std::optional<ClusterLabels> truth;
    if (label_idx) {
        std::vector<int> codes;
        codes.reserve(rows.size());
        std::map<std::string, int> seen;
        std::vector<std::string> order;
        for (const auto& row : rows) {
            const std::string key = detail::trim(row[*label_idx]);
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, static_cast<int>(order.size())).first;
                order.push_back(key);
            }
            codes.push_back(it->second);
        }
        truth = canonicalize_labels(codes);
    }

    DataMatrix x(rows.size(), feature_cols.size(), std::move(values));
    if (standardize_features) x = preprocess::standardize(x);

    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return LabeledDataset{std::move(name), std::move(x), std::move(truth), 0,
                          {{"source", path}}};
}

/// Writes the dataset in the loader's dialect: features f0..f{d-1} plus an
/// optional trailing label column.
inline void save_csv(const LabeledDataset& ds, const std::string& path,
                     bool include_label = true) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_csv: cannot open file for writing: " + path);
    const std::size_t d = ds.x.n_cols();
    const bool with_label = include_label && ds.truth.has_value();
    for (std::size_t j = 0; j < d; ++j) {
        if (j > 0) out << ',';
        out << 'f' << j;
    }
    if (with_label) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < ds.x.n_rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (j > 0) out << ',';
            out << format_double(ds.x(i, j));
        }
        if (with_label) out << ',' << ds.truth->assignments[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_csv: write failed: " + path);
}

}  // namespace spinex::datasets
