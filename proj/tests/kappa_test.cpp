// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/errors.hpp"
#include "tutorguard/analytics/kappa.hpp"

#include <gtest/gtest.h>

namespace tutorguard::analytics {
namespace {

TEST(CohenKappa, BinaryConfusionTable)
{
    // p_o = 0.7, p_e = 0.5.
    EXPECT_EQ(cohen_kappa(ConfusionMatrix{{20, 5}, {10, 15}}), 0.4);
}

TEST(CohenKappa, IdenticalVectorsGiveOne)
{
    std::vector<int> const a = {0, 1, 2, 1, 0, 2};
    EXPECT_DOUBLE_EQ(cohen_kappa(std::span<int const>(a), std::span<int const>(a)), 1.0);
}

TEST(CohenKappa, MatchesReferenceImplementation)
{
    // Values from sklearn.metrics.cohen_kappa_score.
    std::vector<int> const a = {0, 0, 1, 1, 2, 2, 2, 0, 1, 2, 0, 1};
    std::vector<int> const b = {0, 1, 1, 1, 2, 2, 0, 0, 1, 2, 0, 2};
    EXPECT_NEAR(cohen_kappa(std::span<int const>(a), std::span<int const>(b)), 0.625, 1e-12);
    std::vector<int> const x = {1, 1, 2, 2, 2, 1, 2, 1};
    std::vector<int> const y = {1, 2, 2, 2, 1, 1, 2, 1};
    EXPECT_NEAR(cohen_kappa(std::span<int const>(x), std::span<int const>(y)), 0.5, 1e-12);
}

TEST(CohenKappa, UndefinedCases)
{
    std::vector<int> const constant = {1, 1, 1};
    EXPECT_THROW(cohen_kappa(std::span<int const>(constant), std::span<int const>(constant)), AnalyticsError);
    EXPECT_THROW(cohen_kappa(ConfusionMatrix{{1}}), AnalyticsError);
    std::vector<int> const shorter = {1, 2};
    EXPECT_THROW(cohen_kappa(std::span<int const>(constant), std::span<int const>(shorter)), AnalyticsError);
}

// Label pair built from Table-1 sized counts with planted disagreements:
// 46 per debugging subcategory moved to the next subcategory, 170
// Implementation labelled as Debugging, 42 Understanding as Implementation.
void synthetic_pair(std::vector<Category> & a, std::vector<Category> & b)
{
    std::vector<std::pair<Category, int>> const counts = {
        {Category::debugging_error_only, 484},  {Category::debugging_outcome_only, 90},
        {Category::debugging_error_and_outcome, 259}, {Category::implementation, 1038},
        {Category::understanding, 161},         {Category::nothing, 47}};
    for (auto const & [cat, n] : counts) {
        for (int j = 0; j < n; ++j) {
            a.push_back(cat);
            Category other = cat;
            if (is_debugging(cat) && j < 46) {
                other = static_cast<Category>((static_cast<int>(cat) + 1) % 3);
            } else if (cat == Category::implementation && j < 170) {
                other = Category::debugging_error_only;
            } else if (cat == Category::understanding && j < 42) {
                other = Category::implementation;
            }
            b.push_back(other);
        }
    }
}

TEST(CohenKappa, SyntheticPairReachesTargetAgreement)
{
    std::vector<Category> a;
    std::vector<Category> b;
    synthetic_pair(a, b);
    // Reference values from sklearn on the same construction.
    EXPECT_NEAR(cohen_kappa(std::span<Category const>(a), std::span<Category const>(b)), 0.7545517470289175, 1e-12);
    EXPECT_NEAR(cohen_kappa_collapsed(a, b), 0.8251550900232228, 1e-12);
}

TEST(BinaryKappa, PerCategory)
{
    std::vector<Category> const a = {Category::implementation, Category::implementation, Category::nothing,
                                     Category::understanding};
    std::vector<Category> const b = {Category::implementation, Category::nothing, Category::nothing,
                                     Category::understanding};
    // Implementation vs rest: [[1,1],[0,2]] → p_o = 3/4, p_e = (2*1 + 2*3)/16 = 1/2.
    EXPECT_DOUBLE_EQ(binary_kappa(a, b, Category::implementation), 0.5);
    EXPECT_DOUBLE_EQ(binary_kappa(a, b, TopCategory::understanding), 1.0);
}

} // namespace
} // namespace tutorguard::analytics
