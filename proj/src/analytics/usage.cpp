// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/usage.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>

namespace tutorguard::analytics {

double apply(SkewTransform t, double x)
{
    return t == SkewTransform::log1p ? std::log1p(x) : x;
}

std::vector<double> standardized_row_means(Matrix const & items,
                                           std::vector<std::string> const & names)
{
    if (items.empty()) {
        return {};
    }
    std::size_t const n = items.size();
    std::size_t const k = items.front().size();
    std::vector<double> sums(n, 0.0);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = items[i][j];
        auto const z = zscores(column, j < names.size() ? names[j] : fmt::format("item {}", j));
        for (std::size_t i = 0; i < n; ++i) sums[i] += z[i];
    }
    for (auto & s : sums) s /= static_cast<double>(k);
    return sums;
}

CompositeUsage composite_usage(std::vector<UsageRecord> const & records,
                               std::set<std::string> const & exclusions, SkewTransform transform)
{
    CompositeUsage out;
    std::vector<UsageRecord const *> included;
    for (auto const & r : records) {
        if (exclusions.contains(r.user_id)) {
            out.excluded_users.push_back(r.user_id);
        } else {
            included.push_back(&r);
        }
    }
    if (included.size() < 3) {
        throw AnalyticsError(fmt::format(
            "composite usage needs at least 3 users after exclusions, got {}", included.size()));
    }

    static std::vector<std::string> const names = {
        "total_queries", "total_sessions", "avg_session_length_seconds"};
    Matrix transformed;
    for (auto const * r : included) {
        transformed.push_back({
            apply(transform, static_cast<double>(r->total_queries)),
            apply(transform, static_cast<double>(r->total_sessions)),
            apply(transform, r->avg_session_length_seconds),
        });
    }
    auto const composite = standardized_row_means(transformed, names);

    Matrix standardized(included.size(), std::vector<double>(3));
    std::vector<double> column(included.size());
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < included.size(); ++i) column[i] = transformed[i][j];
        auto const z = zscores(column, names[j]);
        for (std::size_t i = 0; i < included.size(); ++i) standardized[i][j] = z[i];
    }
    out.cronbach_alpha = cronbach_alpha(standardized);

    for (std::size_t i = 0; i < included.size(); ++i) {
        out.scores.push_back({included[i]->user_id, composite[i]});
    }
    return out;
}

std::vector<std::string> extreme_query_outliers(std::vector<UsageRecord> const & records)
{
    if (records.size() < 2) {
        return {};
    }
    std::vector<double> totals;
    for (auto const & r : records) totals.push_back(static_cast<double>(r.total_queries));
    double const cutoff = mean(totals) + 3.0 * sample_sd(totals);
    std::vector<std::string> out;
    for (auto const & r : records) {
        if (static_cast<double>(r.total_queries) > cutoff) {
            out.push_back(r.user_id);
        }
    }
    return out;
}

std::vector<UserScore> course_performance(std::vector<PerformanceRecord> const & records,
                                          std::set<std::string> const & users,
                                          SkewTransform transform)
{
    std::map<std::string, std::map<std::string, double>> table;   // user -> activity -> points
    std::set<std::string> activities;
    for (auto const & r : records) {
        if (!users.empty() && !users.contains(r.user_id)) continue;
        table[r.user_id][r.activity_id] = r.points;
        activities.insert(r.activity_id);
    }
    for (auto const & u : users) {
        table.try_emplace(u);
    }
    if (table.size() < 2) {
        throw AnalyticsError(fmt::format("course performance needs at least 2 users, got {}", table.size()));
    }
    if (activities.empty()) {
        throw AnalyticsError("course performance: no activities");
    }

    std::vector<std::string> gaps;
    for (auto const & [user, row] : table) {
        for (auto const & a : activities) {
            if (!row.contains(a)) gaps.push_back(fmt::format("({}, {})", user, a));
        }
    }
    if (!gaps.empty()) {
        throw AnalyticsError(fmt::format("course performance: missing points for {}",
                                         fmt::join(gaps, ", ")));
    }

    Matrix m;
    std::vector<std::string> user_ids;
    for (auto const & [user, row] : table) {
        user_ids.push_back(user);
        std::vector<double> values;
        for (auto const & a : activities) values.push_back(apply(transform, row.at(a)));
        m.push_back(std::move(values));
    }
    std::vector<std::string> names;
    for (auto const & a : activities) names.push_back(fmt::format("activity '{}'", a));
    auto const scores = standardized_row_means(m, names);

    std::vector<UserScore> out;
    for (std::size_t i = 0; i < user_ids.size(); ++i) out.push_back({user_ids[i], scores[i]});
    return out;
}

UsagePerformance usage_performance_analysis(std::vector<UsageRecord> const & usage,
                                            std::vector<PerformanceRecord> const & performance,
                                            ExclusionPolicy const & exclusions,
                                            SkewTransform transform)
{
    std::set<std::string> excluded = exclusions.users;
    if (exclusions.auto_extreme_queries) {
        for (auto const & u : extreme_query_outliers(usage)) excluded.insert(u);
    }

    UsagePerformance out;
    out.composite = composite_usage(usage, excluded, transform);

    std::set<std::string> included;
    for (auto const & s : out.composite.scores) included.insert(s.user_id);
    std::set<std::string> log_users;
    for (auto const & u : usage) log_users.insert(u.user_id);
    std::set<std::string> perf_only;
    for (auto const & r : performance) {
        if (!log_users.contains(r.user_id)) perf_only.insert(r.user_id);
    }
    out.performance_only_users.assign(perf_only.begin(), perf_only.end());

    out.performance = course_performance(performance, included, transform);

    std::map<std::string, double> perf_by_user;
    for (auto const & p : out.performance) perf_by_user.emplace(p.user_id, p.score);

    std::vector<double> x;
    std::vector<double> y;
    for (auto const & u : out.composite.scores) {
        double const p = perf_by_user.at(u.user_id);
        x.push_back(u.score);
        y.push_back(p);
        out.scatter.push_back({u.user_id, u.score, p});
    }
    out.correlation = pearson(x, y);
    out.correlation.excluded_users = out.composite.excluded_users;
    return out;
}

} // namespace tutorguard::analytics
