// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/query_model.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tutorguard::analytics {

/// Edit distance over Unicode code points (insert, delete, substitute).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Levenshtein(a, b) / max(|a|, |b|) in code points; 0 when both are empty.
double normalized_field_distance(std::string_view a, std::string_view b);

/// Sum of normalized distances over code, error and issue. In [0, 3].
double query_similarity(HelpRequest const & x, HelpRequest const & y);

struct DedupConfig
{
    double k = 0.25;
};

/// Throws std::invalid_argument unless 0 <= k <= 3.
void validate(DedupConfig const & cfg);

struct DedupResult
{
    std::vector<HelpRequest> kept;             // input order preserved
    std::vector<std::string> duplicate_ids;    // dropped queries, input order
    std::size_t duplicate_count() const { return duplicate_ids.size(); }
};

/**
 * Drops resubmissions. Within each user's stream (ordered by timestamp,
 * ties in input order) a query is a duplicate when its similarity to the
 * user's most recent kept query is below cfg.k. Users never interact.
 */
DedupResult deduplicate(std::vector<HelpRequest> const & queries, DedupConfig const & cfg = {});

} // namespace tutorguard::analytics
