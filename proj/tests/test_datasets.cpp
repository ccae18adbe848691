#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/datasets.hpp"
#include "test_support.hpp"

using spinex::datasets::LabeledDataset;
using spinex::datasets::load_csv;
using spinex::datasets::make_blobs;
using spinex::datasets::make_named;
using spinex::datasets::save_csv;
using testsupport::TempDir;

TEST(DatasetRegistry, ExactNameList) {
    const std::vector<std::string> expected = {
        "Aggregated Clusters", "Anisotropic", "Blobs", "Broken Rings", "Checkerboard", "Circles",
        "Concentric Spheres", "Disjoint Clusters", "Feature Entanglement", "Friedman's Function",
        "Gaussian Mixture", "Hierarchical Clusters", "High Dimensional Blobs",
        "Highly Correlated Features", "Interlocking Moons", "Manifold Learning Dataset", "Moons",
        "Nested Clusters", "No structure", "Non-spherical Gaussian Mixture", "Overlapping Circles",
        "Periodic Patterns", "Random Uniform Scatter", "Random Walk Clusters",
        "Shifting Variance Clusters", "Simple Blobs", "Sine Wave Clusters",
        "Sparse High-Dimensional", "Spirals", "Stretched Blobs", "Swiss Roll", "Varied Density",
        "Winding Function Clusters"};
    EXPECT_EQ(spinex::datasets::dataset_names(), expected);
    EXPECT_EQ(spinex::datasets::dataset_names().size(), 33u);
}

TEST(DatasetRegistry, EveryGeneratorIsDeterministicInItsSeed) {
    for (const std::string& name : spinex::datasets::dataset_names()) {
        const LabeledDataset a = make_named(name, 7);
        const LabeledDataset b = make_named(name, 7);
        EXPECT_TRUE(a.x == b.x) << name;
        EXPECT_EQ(a.truth == b.truth, true) << name;
        EXPECT_EQ(a.seed, 7u) << name;

        const LabeledDataset c = make_named(name, 8);
        EXPECT_FALSE(a.x == c.x) << name;
    }
}

TEST(DatasetRegistry, ShapeSpotChecks) {
    const LabeledDataset moons = make_named("Moons", 3);
    EXPECT_EQ(moons.x.n_rows(), 200u);
    EXPECT_EQ(moons.x.n_cols(), 2u);
    ASSERT_TRUE(moons.truth.has_value());
    EXPECT_EQ(moons.truth->n_clusters, 2);

    const LabeledDataset blobs = make_named("Blobs", 3);
    EXPECT_EQ(blobs.x.n_rows(), 100u);
    EXPECT_EQ(blobs.x.n_cols(), 4u);
    ASSERT_TRUE(blobs.truth.has_value());
    EXPECT_EQ(blobs.truth->n_clusters, 4);

    const LabeledDataset friedman = make_named("Friedman's Function", 3);
    EXPECT_EQ(friedman.x.n_rows(), 1000u);
    EXPECT_EQ(friedman.x.n_cols(), 6u);
    EXPECT_FALSE(friedman.truth.has_value());

    const LabeledDataset sparse = make_named("Sparse High-Dimensional", 3);
    EXPECT_EQ(sparse.x.n_rows(), 200u);
    EXPECT_EQ(sparse.x.n_cols(), 100u);
    EXPECT_FALSE(sparse.truth.has_value());

    const LabeledDataset roll = make_named("Swiss Roll", 3);
    EXPECT_EQ(roll.x.n_rows(), 300u);
    EXPECT_EQ(roll.x.n_cols(), 2u);
    EXPECT_FALSE(roll.truth.has_value());

    const LabeledDataset high = make_named("High Dimensional Blobs", 3);
    EXPECT_EQ(high.x.n_rows(), 300u);
    EXPECT_EQ(high.x.n_cols(), 10u);
    ASSERT_TRUE(high.truth.has_value());
    EXPECT_EQ(high.truth->n_clusters, 5);

    const LabeledDataset varied = make_named("Varied Density", 3);
    EXPECT_EQ(varied.x.n_rows(), 100u);
    EXPECT_EQ(varied.x.n_cols(), 12u);
    ASSERT_TRUE(varied.truth.has_value());
    EXPECT_EQ(varied.truth->n_clusters, 3);
}

TEST(DatasetRegistry, UnknownNameIsRejected) {
    try {
        make_named("Nope", 1);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "Unknown dataset name: Nope");
    }
}

TEST(Blobs, BalancedBlockLayout) {
    const LabeledDataset ds = make_blobs(10, 3, 4, 0.5, 11);
    EXPECT_EQ(ds.x.n_rows(), 10u);
    EXPECT_EQ(ds.x.n_cols(), 3u);
    ASSERT_TRUE(ds.truth.has_value());
    // 10 over 4 centers: the first two blocks get the extra points.
    EXPECT_EQ(ds.truth->assignments, (std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 3, 3}));
    EXPECT_EQ(ds.params.at("centers"), "4");
}

TEST(Csv, SaveLoadRoundTripIsExact) {
    TempDir dir;
    const LabeledDataset ds = make_blobs(25, 3, 3, 1.0, 42);
    const std::string path = dir.file("blobs.csv");
    save_csv(ds, path);

    const LabeledDataset loaded = load_csv(path, std::string("label"));
    EXPECT_EQ(loaded.name, "blobs");
    EXPECT_TRUE(loaded.x == ds.x);
    ASSERT_TRUE(loaded.truth.has_value());
    EXPECT_EQ(loaded.truth->assignments, ds.truth->assignments);
    EXPECT_EQ(loaded.truth->n_clusters, ds.truth->n_clusters);

    // Double write produces identical bytes.
    const std::string again = dir.file("blobs2.csv");
    save_csv(ds, again);
    EXPECT_EQ(testsupport::read_file(path), testsupport::read_file(again));
}

TEST(Csv, LabelColumnCanBeOmittedOnSave) {
    TempDir dir;
    const LabeledDataset ds = make_blobs(10, 2, 2, 1.0, 5);
    const std::string path = dir.file("nolabel.csv");
    save_csv(ds, path, false);

    const auto lines = testsupport::read_lines(path);
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines[0], "f0,f1");
    const LabeledDataset loaded = load_csv(path);
    EXPECT_FALSE(loaded.truth.has_value());
    EXPECT_EQ(loaded.x.n_cols(), 2u);
}

TEST(Csv, StringLabelsEncodeInFirstOccurrenceOrder) {
    TempDir dir;
    const std::string path = dir.file("pets.csv");
    {
        std::ofstream out(path);
        out << "a,b,species\n"
            << "1,2,dog\n"
            << "3,4,cat\n"
            << "5,6,dog\n"
            << "7,8,bird\n";
    }
    const LabeledDataset ds = load_csv(path, std::string("species"));
    ASSERT_TRUE(ds.truth.has_value());
    EXPECT_EQ(ds.truth->assignments, (std::vector<int>{0, 1, 0, 2}));
    EXPECT_EQ(ds.truth->n_clusters, 3);
    EXPECT_EQ(ds.x.n_cols(), 2u);
}

TEST(Csv, FullyTextualColumnIsDroppedFromFeatures) {
    TempDir dir;
    const std::string path = dir.file("notes.csv");
    {
        std::ofstream out(path);
        out << "a,comment,b\n"
            << "1,first,2\n"
            << "3,second,4\n";
    }
    const LabeledDataset ds = load_csv(path);
    EXPECT_EQ(ds.x.n_cols(), 2u);
    EXPECT_DOUBLE_EQ(ds.x(1, 1), 4.0);
}

TEST(Csv, MixedColumnIsRejectedWithLocation) {
    TempDir dir;
    const std::string path = dir.file("mixed.csv");
    {
        std::ofstream out(path);
        out << "a,b\n"
            << "1,2\n"
            << "3,oops\n";
    }
    try {
        load_csv(path);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "load_csv: non-numeric cell at row 2, column 'b'");
    }
}

TEST(Csv, NonFiniteValueIsRejected) {
    TempDir dir;
    const std::string path = dir.file("inf.csv");
    {
        std::ofstream out(path);
        out << "a,b\n"
            << "1,2\n"
            << "inf,4\n";
    }
    EXPECT_THROW(load_csv(path), std::invalid_argument);
}

TEST(Csv, LoaderValidatesStructure) {
    TempDir dir;
    EXPECT_THROW(load_csv(dir.file("missing.csv")), std::invalid_argument);

    const std::string ragged = dir.file("ragged.csv");
    {
        std::ofstream out(ragged);
        out << "a,b\n1,2\n3\n";
    }
    EXPECT_THROW(load_csv(ragged), std::invalid_argument);

    const std::string headers_only = dir.file("headers.csv");
    {
        std::ofstream out(headers_only);
        out << "a,b\n";
    }
    EXPECT_THROW(load_csv(headers_only), std::invalid_argument);

    const std::string no_such_label = dir.file("nolabelcol.csv");
    {
        std::ofstream out(no_such_label);
        out << "a,b\n1,2\n";
    }
    EXPECT_THROW(load_csv(no_such_label, std::string("label")), std::invalid_argument);
}

TEST(Csv, StandardizeFlagCentersColumns) {
    TempDir dir;
    const LabeledDataset ds = make_blobs(40, 2, 2, 1.0, 9);
    const std::string path = dir.file("std.csv");
    save_csv(ds, path);

    const LabeledDataset loaded = load_csv(path, std::string("label"), true);
    for (std::size_t j = 0; j < loaded.x.n_cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < loaded.x.n_rows(); ++i) mean += loaded.x(i, j);
        mean /= static_cast<double>(loaded.x.n_rows());
        EXPECT_NEAR(mean, 0.0, 1e-9);
    }
}
