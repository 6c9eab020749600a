// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/analytics/errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tutorguard::analytics {

double mean(std::span<double const> xs);

/// Sample variance (n - 1 denominator). Requires n >= 2.
double sample_variance(std::span<double const> xs);
double sample_sd(std::span<double const> xs);

bool is_constant(std::span<double const> xs);

/// (x - mean) / sample SD. Throws AnalyticsError naming `what` when the
/// values are constant or fewer than two.
std::vector<double> zscores(std::span<double const> xs, std::string const & what = "values");

/// Rows are observations (users), columns are items.
using Matrix = std::vector<std::vector<double>>;

/**
 * alpha = K/(K-1) * (1 - sum of item variances / variance of row sums),
 * sample variances throughout. Requires K >= 2 items, n >= 3 rows and a
 * positive row-sum variance.
 */
double cronbach_alpha(Matrix const & items);

struct CorrelationResult
{
    double r = 0.0;
    double p_two_tailed = 1.0;
    std::size_t n = 0;
    std::vector<std::string> excluded_users;
};

/// Sample Pearson r with a two-tailed p from t = r*sqrt((n-2)/(1-r^2)) on
/// n-2 degrees of freedom. Requires equal lengths, n >= 3, non-constant
/// inputs.
CorrelationResult pearson(std::span<double const> x, std::span<double const> y);

/// Two-tailed p for Student's t with `df` degrees of freedom.
double t_two_tailed_p(double t, double df);

} // namespace tutorguard::analytics
