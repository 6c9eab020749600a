// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/report.hpp"

#include "tutorguard/analytics/kappa.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace tutorguard::analytics {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr TopCategory table_categories[] = {
    TopCategory::debugging,
    TopCategory::implementation,
    TopCategory::understanding,
    TopCategory::nothing,
};

struct SubcategoryRow
{
    Category category;
    char const * label;
};

constexpr SubcategoryRow subcategory_rows[] = {
    {Category::debugging_error_only, "Including error"},
    {Category::debugging_outcome_only, "Including outcome"},
    {Category::debugging_error_and_outcome, "Including error & outcome"},
};

template <typename F>
std::optional<double> try_kappa(F f)
{
    try {
        return f();
    } catch (AnalyticsError const &) {
        return std::nullopt;
    }
}

double percent(std::size_t count, std::size_t base)
{
    return base == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(base);
}

} // namespace

CategoryReport category_report(std::vector<HelpRequest> const & kept,
                               std::vector<QueryLabel> const & labels,
                               std::vector<AutoFlags> const & flags,
                               CategoryOptions const & options)
{
    CategoryReport report;

    std::set<std::string> kept_ids;
    for (auto const & q : kept) kept_ids.insert(q.id);

    std::map<std::string, std::map<std::string, Category>> by_query;   // query -> rater -> label
    std::set<std::string> raters;
    for (auto const & l : labels) {
        if (!kept_ids.contains(l.query_id)) {
            ++report.ignored_labels;
            continue;
        }
        by_query[l.query_id][l.rater_id] = l.category;
        raters.insert(l.rater_id);
    }

    if (options.primary_rater) {
        report.primary_rater = *options.primary_rater;
    } else if (!raters.empty()) {
        report.primary_rater = *raters.begin();
    }
    for (auto const & r : raters) {
        if (r != report.primary_rater) {
            report.secondary_rater = r;
            break;
        }
    }

    std::map<std::string, Category> consensus;
    std::vector<Category> a;
    std::vector<Category> b;
    for (auto const & [query, by_rater] : by_query) {
        auto const primary = by_rater.find(report.primary_rater);
        std::optional<Category> second;
        if (report.secondary_rater) {
            auto const it = by_rater.find(*report.secondary_rater);
            if (it != by_rater.end()) second = it->second;
        }
        if (primary != by_rater.end()) {
            consensus[query] = primary->second;
            if (second) {
                a.push_back(primary->second);
                b.push_back(*second);
                if (primary->second != *second) ++report.disagreements;
            }
        } else if (second) {
            consensus[query] = *second;
        } else {
            consensus[query] = by_rater.begin()->second;
        }
    }
    report.double_labeled = a.size();

    std::map<TopCategory, std::size_t> top_counts;
    std::map<Category, std::size_t> sub_counts;
    for (auto const & [query, c] : consensus) {
        if (c == Category::off_topic) {
            ++report.off_topic;
            continue;
        }
        ++report.labeled_queries;
        ++top_counts[top_level(c)];
        if (is_debugging(c)) ++sub_counts[c];
    }
    report.unlabeled_queries = kept.size() - consensus.size();

    report.kappa_full = try_kappa([&] { return cohen_kappa(a, b); });
    report.kappa_collapsed = try_kappa([&] { return cohen_kappa_collapsed(a, b); });

    for (auto top : table_categories) {
        CategoryRow row;
        row.name = top == TopCategory::debugging ? "Debugging (all)"
                                                 : std::string(top_category_name(top));
        row.count = top_counts[top];
        row.percent = percent(row.count, report.labeled_queries);
        row.kappa = try_kappa([&] { return binary_kappa(a, b, top); });
        report.categories.push_back(std::move(row));
    }
    std::size_t const debugging = top_counts[TopCategory::debugging];
    for (auto const & sub : subcategory_rows) {
        CategoryRow row;
        row.name = sub.label;
        row.count = sub_counts[sub.category];
        row.percent = percent(row.count, debugging);
        row.kappa = try_kappa([&] { return binary_kappa(a, b, sub.category); });
        report.debugging_subcategories.push_back(std::move(row));
    }

    // Per-user fractions.
    std::map<std::string, UserFractions> users;
    std::map<std::string, std::map<std::string, std::size_t>> cat_counts;
    std::map<std::string, std::map<std::string, std::size_t>> flag_counts;
    bool const have_flags = !flags.empty();
    bool const have_copied = have_flags;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto const & q = kept[i];
        auto & u = users[q.user_id];
        u.user_id = q.user_id;
        ++u.queries;
        auto const it = consensus.find(q.id);
        if (it != consensus.end() && it->second != Category::off_topic) {
            ++u.labeled;
            ++cat_counts[q.user_id][std::string(top_category_name(top_level(it->second)))];
        }
        bool const short_issue = have_flags ? flags[i].short_issue : flag_short_issue(q.issue);
        bool const copied = have_copied && flags[i].copied;
        if (short_issue) ++flag_counts[q.user_id]["short_issue"];
        if (copied) ++flag_counts[q.user_id]["copied"];
        if (short_issue || copied) ++flag_counts[q.user_id]["short_or_copied"];
    }
    for (auto & [user, u] : users) {
        for (auto top : table_categories) {
            auto const name = std::string(top_category_name(top));
            u.categories[name] = u.labeled == 0
                ? 0.0
                : static_cast<double>(cat_counts[user][name]) / static_cast<double>(u.labeled);
        }
        std::vector<std::string> names = {"short_issue"};
        if (have_copied) {
            names.push_back("copied");
            names.push_back("short_or_copied");
        }
        for (auto const & name : names) {
            u.flags[name] = static_cast<double>(flag_counts[user][name]) / static_cast<double>(u.queries);
        }
        report.per_user.push_back(std::move(u));
    }
    return report;
}

namespace {

MetricSummary summarize(std::vector<double> const & xs)
{
    MetricSummary s;
    if (xs.empty()) return s;
    s.mean = mean(xs);
    s.sd = xs.size() >= 2 ? sample_sd(xs) : 0.0;
    return s;
}

} // namespace

AnalysisReport analyze(AnalysisInputs const & inputs, AnalysisOptions const & options)
{
    AnalysisReport report;
    report.options = options;
    report.total_queries = inputs.log.size();

    auto const dedup = deduplicate(inputs.log, options.dedup);
    report.duplicates = dedup.duplicate_count();
    report.kept = dedup.kept.size();

    auto const sessions = sessionize(inputs.log, options.gap_seconds);
    report.total_sessions = sessions.size();
    report.usage = usage_metrics(sessions);
    report.users = report.usage.size();

    std::vector<double> q;
    std::vector<double> s;
    std::vector<double> l;
    for (auto const & u : report.usage) {
        q.push_back(static_cast<double>(u.total_queries));
        s.push_back(static_cast<double>(u.total_sessions));
        l.push_back(u.avg_session_length_seconds);
    }
    report.queries_summary = summarize(q);
    report.sessions_summary = summarize(s);
    report.session_length_summary = summarize(l);

    std::set<std::string> excluded = options.exclusions.users;
    if (options.exclusions.auto_extreme_queries) {
        for (auto const & u : extreme_query_outliers(report.usage)) excluded.insert(u);
    }
    report.composite = composite_usage(report.usage, excluded, options.transform);

    std::vector<AutoFlags> flags;
    if (inputs.exercises) {
        ExerciseIndex const index(*inputs.exercises);
        flags.reserve(dedup.kept.size());
        report.flags.queries = dedup.kept.size();
        std::size_t copied = 0;
        std::size_t either = 0;
        for (auto const & kq : dedup.kept) {
            flags.push_back(index.flags(kq.issue));
            auto const & f = flags.back();
            report.flags.short_issue += f.short_issue ? 1 : 0;
            copied += f.copied ? 1 : 0;
            either += (f.short_issue || f.copied) ? 1 : 0;
        }
        report.flags.copied = copied;
        report.flags.short_or_copied = either;
    }

    if (inputs.labels) {
        report.categories = category_report(dedup.kept, *inputs.labels, flags, options.categories);
    }

    if (inputs.performance) {
        report.correlation = usage_performance_analysis(report.usage, *inputs.performance,
                                                        ExclusionPolicy{excluded, false},
                                                        options.transform);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json optional_number(std::optional<double> v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json rows_json(std::vector<CategoryRow> const & rows)
{
    auto out = ordered_json::array();
    for (auto const & r : rows) {
        ordered_json j;
        j["category"] = r.name;
        j["count"] = r.count;
        j["percent"] = r.percent;
        j["percent_rounded"] = std::lround(r.percent);
        j["kappa"] = optional_number(r.kappa);
        out.push_back(std::move(j));
    }
    return out;
}

ordered_json summary_json(MetricSummary const & s)
{
    return {{"mean", s.mean}, {"sd", s.sd}};
}

std::string format_kappa(std::optional<double> k)
{
    if (!k) return "-";
    auto s = fmt::format("{:.2f}", *k);
    if (s.starts_with("0.")) s.erase(0, 1);
    else if (s.starts_with("-0.")) s.erase(1, 1);
    return s;
}

void table_rows(std::string & out, std::string const & heading,
                std::vector<CategoryRow> const & rows)
{
    out += fmt::format("{:<28}{:>7}{:>9}{:>7}\n", heading, "Count", "Percent", "Kappa");
    for (auto const & r : rows) {
        out += fmt::format("{:<28}{:>7}{:>8}%{:>7}\n", r.name, r.count, std::lround(r.percent),
                           format_kappa(r.kappa));
    }
}

} // namespace

nlohmann::ordered_json to_json(CategoryReport const & r)
{
    ordered_json j;
    j["primary_rater"] = r.primary_rater;
    j["secondary_rater"] = r.secondary_rater ? ordered_json(*r.secondary_rater) : ordered_json(nullptr);
    j["labeled_queries"] = r.labeled_queries;
    j["off_topic"] = r.off_topic;
    j["unlabeled_queries"] = r.unlabeled_queries;
    j["ignored_labels"] = r.ignored_labels;
    j["double_labeled"] = r.double_labeled;
    j["disagreements"] = r.disagreements;
    j["kappa_full"] = optional_number(r.kappa_full);
    j["kappa_collapsed"] = optional_number(r.kappa_collapsed);
    j["table"] = rows_json(r.categories);
    j["debugging_subcategories"] = rows_json(r.debugging_subcategories);
    auto users = ordered_json::array();
    for (auto const & u : r.per_user) {
        ordered_json uj;
        uj["user_id"] = u.user_id;
        uj["queries"] = u.queries;
        uj["labeled"] = u.labeled;
        uj["categories"] = u.categories;
        uj["flags"] = u.flags;
        users.push_back(std::move(uj));
    }
    j["per_user"] = std::move(users);
    return j;
}

nlohmann::ordered_json to_json(AnalysisReport const & r)
{
    ordered_json j;
    {
        ordered_json o;
        o["dedup_k"] = r.options.dedup.k;
        o["gap_seconds"] = r.options.gap_seconds;
        o["exclude_users"] = r.options.exclusions.users;
        o["auto_exclude_outliers"] = r.options.exclusions.auto_extreme_queries;
        o["skew_transform"] = r.options.transform == SkewTransform::log1p ? "log1p" : "none";
        j["options"] = std::move(o);
    }
    j["dedup"] = {
        {"total_queries", r.total_queries},
        {"duplicates", r.duplicates},
        {"kept", r.kept},
    };
    j["sessions"] = {
        {"gap_seconds", r.options.gap_seconds},
        {"total_sessions", r.total_sessions},
    };
    {
        ordered_json u;
        u["users"] = r.users;
        ordered_json summary;
        summary["total_queries"] = summary_json(r.queries_summary);
        summary["total_sessions"] = summary_json(r.sessions_summary);
        summary["avg_session_length_seconds"] = summary_json(r.session_length_summary);
        u["summary"] = std::move(summary);
        auto per_user = ordered_json::array();
        for (auto const & rec : r.usage) {
            per_user.push_back(ordered_json{
                {"user_id", rec.user_id},
                {"total_queries", rec.total_queries},
                {"total_sessions", rec.total_sessions},
                {"avg_session_length_seconds", rec.avg_session_length_seconds},
            });
        }
        u["per_user"] = std::move(per_user);
        ordered_json c;
        c["cronbach_alpha"] = r.composite.cronbach_alpha;
        c["excluded_users"] = r.composite.excluded_users;
        auto scores = ordered_json::array();
        for (auto const & s : r.composite.scores) {
            scores.push_back(ordered_json{{"user_id", s.user_id}, {"score", s.score}});
        }
        c["scores"] = std::move(scores);
        u["composite"] = std::move(c);
        j["usage"] = std::move(u);
    }
    if (r.flags.copied) {
        ordered_json f;
        f["queries"] = r.flags.queries;
        f["short_issue"] = r.flags.short_issue;
        f["short_issue_percent"] = percent(r.flags.short_issue, r.flags.queries);
        f["copied"] = *r.flags.copied;
        f["copied_percent"] = percent(*r.flags.copied, r.flags.queries);
        f["short_or_copied"] = *r.flags.short_or_copied;
        f["short_or_copied_percent"] = percent(*r.flags.short_or_copied, r.flags.queries);
        j["flags"] = std::move(f);
    }
    if (r.categories) {
        j["categories"] = to_json(*r.categories);
    }
    if (r.correlation) {
        auto const & c = *r.correlation;
        ordered_json cj;
        cj["r"] = c.correlation.r;
        cj["p_two_tailed"] = c.correlation.p_two_tailed;
        cj["n"] = c.correlation.n;
        cj["excluded_users"] = c.correlation.excluded_users;
        cj["performance_only_users"] = c.performance_only_users;
        auto scatter = ordered_json::array();
        for (auto const & p : c.scatter) {
            scatter.push_back(ordered_json{
                {"user_id", p.user_id}, {"usage", p.usage}, {"performance", p.performance}});
        }
        cj["scatter"] = std::move(scatter);
        j["correlation"] = std::move(cj);
    }
    return j;
}

std::string category_table(CategoryReport const & r)
{
    std::string out;
    table_rows(out, "Query Category", r.categories);
    out += '\n';
    table_rows(out, "Debugging Sub-Categories", r.debugging_subcategories);
    out += fmt::format("\nOverall kappa {} (collapsed {}); {} doubly labeled, {} disagreements\n",
                       format_kappa(r.kappa_full), format_kappa(r.kappa_collapsed),
                       r.double_labeled, r.disagreements);
    return out;
}

std::string to_text(AnalysisReport const & r)
{
    std::string out;
    out += fmt::format("Queries: {} from {} users; {} duplicates removed (k = {}), {} kept\n",
                       r.total_queries, r.users, r.duplicates, r.options.dedup.k, r.kept);
    out += fmt::format("Sessions: {} (gap {} s)\n", r.total_sessions, r.options.gap_seconds);
    out += fmt::format("Total queries     M = {:.2f}, SD = {:.2f}\n", r.queries_summary.mean,
                       r.queries_summary.sd);
    out += fmt::format("Total sessions    M = {:.2f}, SD = {:.2f}\n", r.sessions_summary.mean,
                       r.sessions_summary.sd);
    out += fmt::format("Session length    M = {:.2f}, SD = {:.2f}\n",
                       r.session_length_summary.mean, r.session_length_summary.sd);
    out += fmt::format("Usage composite: Cronbach's alpha = {:.2f} over {} users\n",
                       r.composite.cronbach_alpha, r.composite.scores.size());
    if (r.flags.copied) {
        out += fmt::format("Short issue: {} ({:.0f}%); copied >= 80%: {} ({:.0f}%)\n",
                           r.flags.short_issue, percent(r.flags.short_issue, r.flags.queries),
                           *r.flags.copied, percent(*r.flags.copied, r.flags.queries));
    }
    if (r.categories) {
        out += '\n';
        out += category_table(*r.categories);
    }
    if (r.correlation) {
        auto const & c = r.correlation->correlation;
        out += fmt::format("\nUsage vs performance: r = {:.2f}, p = {:.4f}, n = {}\n", c.r,
                           c.p_two_tailed, c.n);
    }
    return out;
}

} // namespace tutorguard::analytics
