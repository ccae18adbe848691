#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "spinex/core.hpp"
#include "test_support.hpp"

using namespace spinex;

TEST(FormatDouble, RoundTripsExactly) {
    const double cases[] = {0.0,       -0.0,     0.1,    1.0 / 3.0, 1.0,      -2.5,
                            1e-300,    1e300,    123456.789,        4.9e-324, 0.5,
                            3.141592653589793238, -7.25e-12};
    for (double v : cases) {
        const std::string s = format_double(v);
        const double back = std::strtod(s.c_str(), nullptr);
        EXPECT_EQ(std::bit_cast<std::uint64_t>(v), std::bit_cast<std::uint64_t>(back))
            << "value " << v << " printed as " << s;
    }
}

TEST(FormatDouble, ShortestForm) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-3.0), "-3");
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(DataMatrix, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(DataMatrix(0, 3, {}), std::invalid_argument);
    EXPECT_THROW(DataMatrix(1, 2, {1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW(DataMatrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
                 std::invalid_argument);
    EXPECT_THROW(DataMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
    EXPECT_THROW(DataMatrix::from_rows({{1.0, 2.0}, {3.0}}), std::invalid_argument);
    EXPECT_THROW(DataMatrix::from_rows({}), std::invalid_argument);
}

TEST(DataMatrix, ShapeAndAccess) {
    const DataMatrix x = DataMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    EXPECT_EQ(x.n_rows(), 2u);
    EXPECT_EQ(x.n_cols(), 3u);
    EXPECT_EQ(x(1, 2), 6.0);
    const auto r = x.row(0);
    EXPECT_EQ(r.size(), 3u);
    EXPECT_EQ(r[1], 2.0);
}

TEST(Labels, CanonicalizeFixture) {
    const auto out = canonicalize_labels(std::vector<int>{2, 2, 0, 1, 0});
    EXPECT_EQ(out.assignments, (std::vector<int>{0, 0, 1, 2, 1}));
    EXPECT_EQ(out.n_clusters, 3);
}

TEST(Labels, CanonicalizeIsIdempotentAndPartitionPreserving) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(40);
        std::vector<int> raw(n);
        for (auto& v : raw) v = static_cast<int>(rng.uniform_index(10)) - 3;
        const auto once = canonicalize_labels(raw);
        const auto twice = canonicalize_labels(once.assignments);
        EXPECT_EQ(once.assignments, twice.assignments);
        // Same partition: pairwise co-membership is preserved.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(raw[i] == raw[j], once.assignments[i] == once.assignments[j]);
            }
        }
        // First occurrences appear in increasing order starting at zero.
        int seen = -1;
        for (int v : once.assignments) {
            EXPECT_LE(v, seen + 1);
            seen = std::max(seen, v);
        }
        EXPECT_EQ(once.n_clusters, seen + 1);
    }
    EXPECT_THROW(canonicalize_labels(std::vector<int>{}), std::invalid_argument);
}

TEST(Threshold, ParseForms) {
    EXPECT_EQ(ThresholdSpec::parse("auto").kind, ThresholdSpec::Kind::automatic);

    const auto pct = ThresholdSpec::parse("75%");
    EXPECT_EQ(pct.kind, ThresholdSpec::Kind::percentile);
    EXPECT_DOUBLE_EQ(pct.value, 75.0);

    const auto fixed = ThresholdSpec::parse("0.35");
    EXPECT_EQ(fixed.kind, ThresholdSpec::Kind::fixed);
    EXPECT_DOUBLE_EQ(fixed.value, 0.35);

    EXPECT_THROW(ThresholdSpec::parse("junk"), std::invalid_argument);
    EXPECT_THROW(ThresholdSpec::parse(""), std::invalid_argument);
    EXPECT_THROW(ThresholdSpec::parse("%"), std::invalid_argument);
    EXPECT_THROW(ThresholdSpec::parse("0%"), std::invalid_argument);
    EXPECT_THROW(ThresholdSpec::parse("100%"), std::invalid_argument);
    EXPECT_THROW(ThresholdSpec::percentile(-1.0), std::invalid_argument);
}

TEST(Config, ValidateRejectsBadSettings) {
    SpinexConfig ok;
    EXPECT_NO_THROW(ok.validate());

    SpinexConfig bad_tier;
    bad_tier.evaluation_tier = 4;
    EXPECT_THROW(bad_tier.validate(), std::invalid_argument);

    SpinexConfig no_methods;
    no_methods.similarity_methods.clear();
    EXPECT_THROW(no_methods.validate(), std::invalid_argument);

    SpinexConfig bad_sample;
    bad_sample.sample_size = 0.0;
    EXPECT_THROW(bad_sample.validate(), std::invalid_argument);

    SpinexConfig bad_features;
    bad_features.max_features = 0;
    EXPECT_THROW(bad_features.validate(), std::invalid_argument);

    SpinexConfig bad_levels;
    bad_levels.multi_level_params.levels = 0;
    EXPECT_THROW(bad_levels.validate(), std::invalid_argument);
}

TEST(Rng, DeterministicPerSeed) {
    Rng a(42), b(42), c(43);
    std::vector<double> va, vb, vc;
    for (int i = 0; i < 100; ++i) {
        va.push_back(a.uniform());
        vb.push_back(b.uniform());
        vc.push_back(c.uniform());
    }
    EXPECT_EQ(va, vb);
    EXPECT_NE(va, vc);
}

TEST(Rng, UniformRangeAndMoments) {
    Rng rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Rng, NormalMoments) {
    Rng rng(9);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(std::sqrt(sumsq / n - mean * mean), 1.0, 0.02);
}

TEST(Rng, UniformIndexBounds) {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LT(rng.uniform_index(7), 7u);
    }
    EXPECT_EQ(rng.uniform_index(1), 0u);
    EXPECT_THROW(rng.uniform_index(0), std::invalid_argument);
}

TEST(Rng, SampleWithoutReplacement) {
    Rng rng(3);
    const auto picks = rng.sample_without_replacement(20, 8);
    EXPECT_EQ(picks.size(), 8u);
    std::set<std::size_t> unique(picks.begin(), picks.end());
    EXPECT_EQ(unique.size(), 8u);
    for (std::size_t p : picks) EXPECT_LT(p, 20u);
    EXPECT_THROW(rng.sample_without_replacement(3, 4), std::invalid_argument);
}

TEST(Helpers, MomentsMatchDirectComputation) {
    const std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
    EXPECT_DOUBLE_EQ(mean_of(xs), 3.75);
    // Population variance: mean of squared deviations.
    double v = 0.0;
    for (double x : xs) v += (x - 3.75) * (x - 3.75);
    v /= 4.0;
    EXPECT_DOUBLE_EQ(population_variance(xs), v);
    EXPECT_DOUBLE_EQ(population_stddev(xs), std::sqrt(v));
}

TEST(DecisionLog, AppendContainsAndCopy) {
    DecisionLog log;
    log.append("first entry");
    log.append("second entry");
    EXPECT_EQ(log.size(), 2u);
    EXPECT_TRUE(log.contains("second"));
    EXPECT_FALSE(log.contains("third"));

    DecisionLog copy = log;
    copy.append("third entry");
    EXPECT_EQ(copy.size(), 3u);
    EXPECT_EQ(log.size(), 2u);
    EXPECT_EQ(log.messages()[0], "first entry");
}
