// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/analytics/errors.hpp"
#include "tutorguard/labels.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tutorguard::analytics {

/// Square agreement table: counts[i][j] = items rater A put in class i and
/// rater B put in class j.
using ConfusionMatrix = std::vector<std::vector<std::uint64_t>>;

/**
 * Cohen's kappa, (p_o - p_e) / (1 - p_e), from integer counts. Evaluated
 * as (N*agree - sum r_i c_i) / (N^2 - sum r_i c_i) so integer tables give
 * exactly rounded results. Throws AnalyticsError when N < 2 or p_e = 1.
 */
double cohen_kappa(ConfusionMatrix const & counts);

/// Kappa for two aligned label vectors over integer codes.
double cohen_kappa(std::span<int const> a, std::span<int const> b);

double cohen_kappa(std::span<Category const> a, std::span<Category const> b);

/// Debugging subcategories collapsed into one class.
double cohen_kappa_collapsed(std::span<Category const> a, std::span<Category const> b);

/// Binary kappa for "is `target`" vs "is not".
double binary_kappa(std::span<Category const> a, std::span<Category const> b, Category target);

/// Binary kappa for membership in a top-level category.
double binary_kappa(std::span<Category const> a, std::span<Category const> b, TopCategory target);

} // namespace tutorguard::analytics
