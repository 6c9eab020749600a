// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/analytics/dedup.hpp"
#include "tutorguard/analytics/flags.hpp"
#include "tutorguard/analytics/sessions.hpp"
#include "tutorguard/analytics/usage.hpp"
#include "tutorguard/labels.hpp"
#include "tutorguard/persistence.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tutorguard::analytics {

// ---------------------------------------------------------------------------
// Category report

struct CategoryRow
{
    std::string name;
    std::size_t count = 0;
    double percent = 0.0;
    std::optional<double> kappa;    // binary, over doubly-labeled queries
};

struct UserFractions
{
    std::string user_id;
    std::size_t queries = 0;            // kept queries
    std::size_t labeled = 0;            // with a consensus label, excluding OffTopic
    std::map<std::string, double> categories;   // Debugging, Implementation, Understanding, Nothing
    std::map<std::string, double> flags;        // short_issue, copied, short_or_copied
};

struct CategoryReport
{
    std::string primary_rater;
    std::optional<std::string> secondary_rater;
    std::size_t labeled_queries = 0;      // consensus labels on kept queries
    std::size_t off_topic = 0;            // excluded from percentages
    std::size_t unlabeled_queries = 0;
    std::size_t ignored_labels = 0;       // labels for queries not in the kept set
    std::size_t double_labeled = 0;
    std::size_t disagreements = 0;
    std::optional<double> kappa_full;
    std::optional<double> kappa_collapsed;
    std::vector<CategoryRow> categories;      // Debugging (all), Implementation, Understanding, Nothing
    std::vector<CategoryRow> debugging_subcategories;
    std::vector<UserFractions> per_user;
};

struct CategoryOptions
{
    /// Rater whose label wins on disagreement. Default: smallest rater id.
    std::optional<std::string> primary_rater;
};

/**
 * Category counts, percentages and kappas plus per-user fractions.
 *
 * Consensus is the primary rater's label, else the other rater's.
 * Percentages exclude OffTopic; subcategory percentages are of Debugging.
 * `flags` is aligned with `kept`; an empty `flags` omits flag fractions.
 */
CategoryReport category_report(std::vector<HelpRequest> const & kept,
                               std::vector<QueryLabel> const & labels,
                               std::vector<AutoFlags> const & flags,
                               CategoryOptions const & options = {});

// ---------------------------------------------------------------------------
// Full analysis

struct AnalysisInputs
{
    std::vector<HelpRequest> log;
    std::optional<std::vector<QueryLabel>> labels;
    std::optional<std::vector<ExerciseText>> exercises;
    std::optional<std::vector<PerformanceRecord>> performance;
};

struct AnalysisOptions
{
    DedupConfig dedup;
    std::int64_t gap_seconds = default_gap_seconds;
    ExclusionPolicy exclusions;
    SkewTransform transform = SkewTransform::log1p;
    CategoryOptions categories;
};

struct MetricSummary
{
    double mean = 0.0;
    double sd = 0.0;
};

struct FlagSummary
{
    std::size_t queries = 0;
    std::size_t short_issue = 0;
    std::optional<std::size_t> copied;        // needs exercises
    std::optional<std::size_t> short_or_copied;
};

struct AnalysisReport
{
    AnalysisOptions options;

    std::size_t total_queries = 0;
    std::size_t users = 0;
    std::size_t duplicates = 0;
    std::size_t kept = 0;

    std::size_t total_sessions = 0;
    std::vector<UsageRecord> usage;
    MetricSummary queries_summary;
    MetricSummary sessions_summary;
    MetricSummary session_length_summary;
    CompositeUsage composite;

    FlagSummary flags;
    std::optional<CategoryReport> categories;
    std::optional<UsagePerformance> correlation;
};

/// Runs every applicable analysis. Throws AnalyticsError when a statistic
/// is undefined for the data.
AnalysisReport analyze(AnalysisInputs const & inputs, AnalysisOptions const & options = {});

nlohmann::ordered_json to_json(AnalysisReport const & report);
nlohmann::ordered_json to_json(CategoryReport const & report);

/// Aligned plain-text tables (Category, Count, Percent, Kappa) plus the
/// headline numbers.
std::string to_text(AnalysisReport const & report);
std::string category_table(CategoryReport const & report);

} // namespace tutorguard::analytics
