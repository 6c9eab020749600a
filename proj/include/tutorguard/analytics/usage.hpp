// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/analytics/sessions.hpp"
#include "tutorguard/analytics/stats.hpp"
#include "tutorguard/persistence.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tutorguard::analytics {

/// Skew correction applied before standardizing. log1p is ln(1 + x).
enum class SkewTransform
{
    log1p,
    none,
};

double apply(SkewTransform t, double x);

struct UserScore
{
    std::string user_id;
    double score = 0.0;
};

struct CompositeUsage
{
    std::vector<UserScore> scores;          // included users, by user id
    double cronbach_alpha = 0.0;
    std::vector<std::string> excluded_users;
};

/// Z-scores each column (sample SD) and averages across columns per row.
/// `names` label the columns in zero-variance errors.
std::vector<double> standardized_row_means(Matrix const & items,
                                           std::vector<std::string> const & names);

/**
 * Usage composite over total queries, total sessions and mean session
 * length: transform, z-score each metric across the included users,
 * average per user. Alpha is computed on the standardized items.
 * Requires >= 3 users after exclusions; throws AnalyticsError naming a
 * zero-variance metric.
 */
CompositeUsage composite_usage(std::vector<UsageRecord> const & records,
                               std::set<std::string> const & exclusions = {},
                               SkewTransform transform = SkewTransform::log1p);

/// Users whose raw total queries exceed mean + 3 SD (sample SD over all).
std::vector<std::string> extreme_query_outliers(std::vector<UsageRecord> const & records);

/**
 * Per-user course performance: transform points per activity, z-score
 * each activity across users, average across activities. When `users` is
 * non-empty only those users are scored and every one of them must have
 * a record for every activity seen among them.
 */
std::vector<UserScore> course_performance(std::vector<PerformanceRecord> const & records,
                                          std::set<std::string> const & users = {},
                                          SkewTransform transform = SkewTransform::log1p);

struct ScatterPoint
{
    std::string user_id;
    double usage = 0.0;
    double performance = 0.0;
};

struct UsagePerformance
{
    CompositeUsage composite;
    std::vector<UserScore> performance;
    CorrelationResult correlation;
    std::vector<ScatterPoint> scatter;
    std::vector<std::string> performance_only_users;   // no queries; ignored
};

struct ExclusionPolicy
{
    std::set<std::string> users;
    bool auto_extreme_queries = false;   // mean + 3 SD rule, off by default
};

/// Composite usage vs course performance over users present in the log,
/// minus exclusions.
UsagePerformance usage_performance_analysis(std::vector<UsageRecord> const & usage,
                                            std::vector<PerformanceRecord> const & performance,
                                            ExclusionPolicy const & exclusions = {},
                                            SkewTransform transform = SkewTransform::log1p);

} // namespace tutorguard::analytics
