// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tutorguard::analytics {

double mean(std::span<double const> xs)
{
    if (xs.empty()) {
        throw AnalyticsError("mean of an empty sample");
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<double const> xs)
{
    if (xs.size() < 2) {
        throw AnalyticsError(fmt::format("sample variance needs at least 2 values, got {}", xs.size()));
    }
    double const m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double sample_sd(std::span<double const> xs)
{
    return std::sqrt(sample_variance(xs));
}

bool is_constant(std::span<double const> xs)
{
    return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>{}) == xs.end();
}

std::vector<double> zscores(std::span<double const> xs, std::string const & what)
{
    if (xs.size() < 2) {
        throw AnalyticsError(fmt::format("cannot standardize {}: need at least 2 values", what));
    }
    if (is_constant(xs)) {
        throw AnalyticsError(fmt::format("zero variance in {}", what));
    }
    double const m = mean(xs);
    double const sd = sample_sd(xs);
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back((x - m) / sd);
    return out;
}

double cronbach_alpha(Matrix const & items)
{
    std::size_t const n = items.size();
    if (n < 3) {
        throw AnalyticsError(fmt::format("Cronbach's alpha needs at least 3 observations, got {}", n));
    }
    std::size_t const k = items.front().size();
    if (k < 2) {
        throw AnalyticsError(fmt::format("Cronbach's alpha needs at least 2 items, got {}", k));
    }
    std::vector<double> totals(n, 0.0);
    double item_variance_sum = 0.0;
    std::vector<double> column(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (items[i].size() != k) {
                throw AnalyticsError("Cronbach's alpha: ragged item matrix");
            }
            column[i] = items[i][j];
            totals[i] += items[i][j];
        }
        item_variance_sum += sample_variance(column);
    }
    double const total_variance = sample_variance(totals);
    if (!(total_variance > 0.0)) {
        throw AnalyticsError("Cronbach's alpha undefined: total score variance is zero");
    }
    double const kd = static_cast<double>(k);
    return kd / (kd - 1.0) * (1.0 - item_variance_sum / total_variance);
}

double t_two_tailed_p(double t, double df)
{
    if (std::isinf(t)) {
        return 0.0;
    }
    boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

CorrelationResult pearson(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size()) {
        throw AnalyticsError(fmt::format("pearson: length mismatch {} vs {}", x.size(), y.size()));
    }
    std::size_t const n = x.size();
    if (n < 3) {
        throw AnalyticsError(fmt::format("pearson: need at least 3 pairs, got {}", n));
    }
    if (is_constant(x) || is_constant(y)) {
        throw AnalyticsError("pearson: correlation undefined for a constant input");
    }
    double const mx = mean(x);
    double const my = mean(y);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double const dx = x[i] - mx;
        double const dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    CorrelationResult result;
    result.r = r;
    result.n = n;
    double const df = static_cast<double>(n - 2);
    double const denom = 1.0 - r * r;
    if (denom <= 0.0) {
        result.p_two_tailed = 0.0;
    } else {
        result.p_two_tailed = t_two_tailed_p(r * std::sqrt(df / denom), df);
    }
    return result;
}

} // namespace tutorguard::analytics
