// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/query_model.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tutorguard::analytics {

inline constexpr std::int64_t default_gap_seconds = 3600;

struct Session
{
    std::string user_id;
    std::vector<std::string> queries;
    Timestamp start{};
    Timestamp end{};
    std::int64_t length_seconds = 0;
};

/**
 * Splits each user's queries into sessions. A new session starts at the
 * user's first query and at every query whose gap from the previous one
 * is >= gap_seconds. Sessions are ordered by user id, then time.
 */
std::vector<Session> sessionize(std::vector<HelpRequest> const & queries,
                                std::int64_t gap_seconds = default_gap_seconds);

struct UsageRecord
{
    std::string user_id;
    std::size_t total_queries = 0;
    std::size_t total_sessions = 0;
    double avg_session_length_seconds = 0.0;
};

/// Per-user counts and mean session length, ordered by user id.
std::vector<UsageRecord> usage_metrics(std::vector<Session> const & sessions);

} // namespace tutorguard::analytics
