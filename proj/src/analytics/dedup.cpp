// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/dedup.hpp"

#include "tutorguard/utf8.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace tutorguard::analytics {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b)
{
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    // b is the shorter; one row of |b|+1 cells.
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t const up = row[j];
            std::size_t const cost = a[i - 1] == b[j - 1] ? 0 : 1;
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + cost});
            diag = up;
        }
    }
    return row[b.size()];
}

double normalized_field_distance(std::string_view a, std::string_view b)
{
    if (a == b) {
        return 0.0;
    }
    auto const ua = utf8::decode_lossy(a);
    auto const ub = utf8::decode_lossy(b);
    std::size_t const longest = std::max(ua.size(), ub.size());
    if (longest == 0) {
        return 0.0;
    }
    return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

double query_similarity(HelpRequest const & x, HelpRequest const & y)
{
    return normalized_field_distance(x.code, y.code)
        + normalized_field_distance(x.error, y.error)
        + normalized_field_distance(x.issue, y.issue);
}

void validate(DedupConfig const & cfg)
{
    if (!(cfg.k >= 0.0 && cfg.k <= 3.0)) {
        throw std::invalid_argument(fmt::format("dedup threshold k must be in [0, 3], got {}", cfg.k));
    }
}

DedupResult deduplicate(std::vector<HelpRequest> const & queries, DedupConfig const & cfg)
{
    validate(cfg);

    std::map<std::string, std::vector<std::size_t>> streams;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        streams[queries[i].user_id].push_back(i);
    }

    std::vector<bool> duplicate(queries.size(), false);
    for (auto & [user, idx] : streams) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
            return queries[l].timestamp < queries[r].timestamp;
        });
        std::optional<std::size_t> anchor;
        for (std::size_t i : idx) {
            if (anchor && query_similarity(queries[*anchor], queries[i]) < cfg.k) {
                duplicate[i] = true;
            } else {
                anchor = i;
            }
        }
    }

    DedupResult result;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (duplicate[i]) {
            result.duplicate_ids.push_back(queries[i].id);
        } else {
            result.kept.push_back(queries[i]);
        }
    }
    return result;
}

} // namespace tutorguard::analytics
