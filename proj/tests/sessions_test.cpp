// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/sessions.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

namespace tutorguard::analytics {
namespace {

std::vector<HelpRequest> at_times(std::vector<std::int64_t> const & ts, std::string user = "u1")
{
    std::vector<HelpRequest> out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out.push_back(testing::query(user + "-" + std::to_string(i), user, ts[i]));
    }
    return out;
}

TEST(Sessionize, GapsBelowThresholdStayTogether)
{
    auto const s = sessionize(at_times({0, 1800, 3599}));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].length_seconds, 3599);
    EXPECT_EQ(s[0].queries.size(), 3u);
}

TEST(Sessionize, ExactThresholdStartsNewSession)
{
    auto const s = sessionize(at_times({0, 3600}));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].length_seconds, 0);
    EXPECT_EQ(s[1].start, testing::at(3600));
}

TEST(Sessionize, GapIsMeasuredFromPreviousQuery)
{
    // 0 → 3000 → 6000: each gap < 3600 so one session of 6000 s.
    auto const s = sessionize(at_times({0, 3000, 6000}));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].length_seconds, 6000);
}

TEST(Sessionize, NoQueriesNoSessions)
{
    EXPECT_TRUE(sessionize({}).empty());
}

TEST(Sessionize, UsersAreSeparate)
{
    auto qs = at_times({0, 10}, "a");
    auto more = at_times({5}, "b");
    qs.insert(qs.end(), more.begin(), more.end());
    auto const s = sessionize(qs);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].user_id, "a");
    EXPECT_EQ(s[1].user_id, "b");
}

TEST(Sessionize, CustomGap)
{
    EXPECT_EQ(sessionize(at_times({0, 60, 120}), 60).size(), 3u);
    EXPECT_EQ(sessionize(at_times({0, 59, 118}), 60).size(), 1u);
    EXPECT_THROW(sessionize(at_times({0}), 0), std::invalid_argument);
}

TEST(Sessionize, PartitionAndGapInvariantsHoldOnRandomSets)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> t(0, 40'000);
    std::uniform_int_distribution<int> n(0, 30);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<HelpRequest> qs;
        for (int u = 0; u < 3; ++u) {
            std::vector<std::int64_t> ts;
            for (int k = n(rng); k > 0; --k) ts.push_back(t(rng));
            auto add = at_times(ts, "u" + std::to_string(u));
            qs.insert(qs.end(), add.begin(), add.end());
        }
        std::shuffle(qs.begin(), qs.end(), rng);
        std::map<std::string, Timestamp> time_of;
        for (auto const & q : qs) time_of[q.id] = q.timestamp;

        auto const sessions = sessionize(qs);
        std::multiset<std::string> seen;
        std::map<std::string, Timestamp> last_end;
        for (auto const & s : sessions) {
            ASSERT_FALSE(s.queries.empty());
            ASSERT_EQ(s.length_seconds, (s.end - s.start).count());
            if (auto it = last_end.find(s.user_id); it != last_end.end()) {
                ASSERT_GE((s.start - it->second).count(), default_gap_seconds);
            }
            for (std::size_t i = 0; i < s.queries.size(); ++i) {
                seen.insert(s.queries[i]);
                if (i > 0) {
                    auto const gap = (time_of[s.queries[i]] - time_of[s.queries[i - 1]]).count();
                    ASSERT_GE(gap, 0);
                    ASSERT_LT(gap, default_gap_seconds);
                }
            }
            last_end[s.user_id] = s.end;
        }
        ASSERT_EQ(seen.size(), qs.size());
        for (auto const & q : qs) ASSERT_EQ(seen.count(q.id), 1u);
    }
}

TEST(UsageMetrics, SingleQuery)
{
    auto const u = usage_metrics(sessionize(at_times({0})));
    ASSERT_EQ(u.size(), 1u);
    EXPECT_EQ(u[0].total_queries, 1u);
    EXPECT_EQ(u[0].total_sessions, 1u);
    EXPECT_EQ(u[0].avg_session_length_seconds, 0.0);
}

TEST(UsageMetrics, AveragesSessionLengths)
{
    // Sessions of 100 s (3 queries) and 300 s (2 queries).
    auto const u = usage_metrics(sessionize(at_times({0, 50, 100, 10'000, 10'300})));
    ASSERT_EQ(u.size(), 1u);
    EXPECT_EQ(u[0].total_queries, 5u);
    EXPECT_EQ(u[0].total_sessions, 2u);
    EXPECT_DOUBLE_EQ(u[0].avg_session_length_seconds, 200.0);
}

} // namespace
} // namespace tutorguard::analytics
