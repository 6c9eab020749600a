// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/errors.hpp"
#include "tutorguard/analytics/stats.hpp"

#include <gtest/gtest.h>

#include <random>

namespace tutorguard::analytics {
namespace {

// Reference values computed offline with scipy.stats.pearsonr and
// scipy.stats.t.sf.
std::vector<double> const ref_x = {1.2, 2.4, 3.1, 4.8, 5.0, 6.3, 7.7, 8.1, 9.9, 10.4};
std::vector<double> const ref_y = {2.0, 1.9, 3.5, 3.9, 6.1, 5.2, 7.9, 7.4, 9.0, 12.1};
std::vector<double> const ref_y_weak = {5.1, 3.2, 6.8, 2.2, 4.4, 7.9, 1.5, 6.0, 3.3, 5.5};

TEST(Pearson, MatchesReferenceDataset)
{
    auto const c = pearson(ref_x, ref_y);
    EXPECT_NEAR(c.r, 0.9545873702780007, 1e-9);
    EXPECT_NEAR(c.p_two_tailed, 1.761240765576019e-05, 1e-6);
    EXPECT_EQ(c.n, 10u);

    auto const w = pearson(ref_x, ref_y_weak);
    EXPECT_NEAR(w.r, -0.05389659069274992, 1e-9);
    EXPECT_NEAR(w.p_two_tailed, 0.8824430887873979, 1e-6);
}

TEST(Pearson, PerfectLinearRelation)
{
    std::vector<double> y;
    for (double v : ref_x) y.push_back(2 * v + 1);
    auto const c = pearson(ref_x, y);
    EXPECT_DOUBLE_EQ(c.r, 1.0);
    EXPECT_EQ(c.p_two_tailed, 0.0);
}

TEST(Pearson, ConstantInputIsAnError)
{
    std::vector<double> const flat(10, 3.0);
    EXPECT_THROW(pearson(flat, ref_y), AnalyticsError);
    EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), AnalyticsError);
    EXPECT_THROW(pearson(ref_x, std::vector<double>{1, 2, 3}), AnalyticsError);
}

TEST(TDistribution, TwoTailedMatchesReference)
{
    EXPECT_NEAR(t_two_tailed_p(2.0, 10), 0.07338803477074039, 1e-9);
    EXPECT_NEAR(t_two_tailed_p(0.5, 46), 0.6194586405970468, 1e-9);
    EXPECT_NEAR(t_two_tailed_p(2.8, 46), 0.007446249633969317, 1e-9);
    EXPECT_NEAR(t_two_tailed_p(-1.7, 3), 0.18769064155340992, 1e-9);
}

TEST(ZScores, MeanZeroSampleSdOne)
{
    auto const z = zscores(ref_y);
    EXPECT_NEAR(mean(z), 0.0, 1e-9);
    EXPECT_NEAR(sample_sd(z), 1.0, 1e-9);
}

TEST(ZScores, ZeroVarianceNamesWhat)
{
    try {
        zscores(std::vector<double>{4, 4, 4}, "total_sessions");
        FAIL();
    } catch (AnalyticsError const & e) {
        EXPECT_STREQ(e.what(), "zero variance in total_sessions");
    }
}

TEST(Moments, SampleVariance)
{
    std::vector<double> const xs = {2, 4, 4, 4, 5, 5, 7, 9};
    EXPECT_DOUBLE_EQ(mean(xs), 5.0);
    EXPECT_DOUBLE_EQ(sample_variance(xs), 32.0 / 7.0);
}

TEST(CronbachAlpha, IdenticalItemsGiveOne)
{
    Matrix m;
    for (double v : ref_x) m.push_back({v, v, v});
    EXPECT_NEAR(cronbach_alpha(m), 1.0, 1e-12);
}

TEST(CronbachAlpha, HandTable)
{
    // Item variances 5/3, 19/12, 2 (sum 63/12); total-score variance
    // 179/12; alpha = 3/2 * (1 - 63/179) = 174/179.
    Matrix const m = {{1, 2, 3}, {2, 3, 3}, {3, 3, 4}, {4, 5, 6}};
    EXPECT_NEAR(cronbach_alpha(m), 174.0 / 179.0, 1e-12);
}

TEST(CronbachAlpha, IndependentItemsNearZero)
{
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n(0, 1);
    Matrix m(1000);
    for (auto & row : m) row = {n(rng), n(rng)};
    EXPECT_NEAR(cronbach_alpha(m), 0.0, 0.15);
}

TEST(CronbachAlpha, DegenerateInputs)
{
    EXPECT_THROW(cronbach_alpha(Matrix{{1, 2}, {2, 3}}), AnalyticsError);
    EXPECT_THROW(cronbach_alpha(Matrix{{1}, {2}, {3}}), AnalyticsError);
    EXPECT_THROW(cronbach_alpha(Matrix{{1, 1}, {1, 1}, {1, 1}}), AnalyticsError);
}

} // namespace
} // namespace tutorguard::analytics
