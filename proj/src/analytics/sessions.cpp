// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/sessions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tutorguard::analytics {

std::vector<Session> sessionize(std::vector<HelpRequest> const & queries,
                                std::int64_t gap_seconds)
{
    if (gap_seconds <= 0) {
        throw std::invalid_argument(fmt::format("gap_seconds must be positive, got {}", gap_seconds));
    }
    std::map<std::string, std::vector<HelpRequest const *>> streams;
    for (auto const & q : queries) {
        streams[q.user_id].push_back(&q);
    }

    std::vector<Session> sessions;
    for (auto & [user, stream] : streams) {
        std::stable_sort(stream.begin(), stream.end(), [](auto const * l, auto const * r) {
            return l->timestamp < r->timestamp;
        });
        Session current;
        for (auto const * q : stream) {
            bool const starts = current.queries.empty()
                || (q->timestamp - current.end).count() >= gap_seconds;
            if (starts && !current.queries.empty()) {
                sessions.push_back(std::move(current));
                current = Session{};
            }
            if (current.queries.empty()) {
                current.user_id = user;
                current.start = q->timestamp;
            }
            current.queries.push_back(q->id);
            current.end = q->timestamp;
            current.length_seconds = (current.end - current.start).count();
        }
        if (!current.queries.empty()) {
            sessions.push_back(std::move(current));
        }
    }
    return sessions;
}

std::vector<UsageRecord> usage_metrics(std::vector<Session> const & sessions)
{
    std::map<std::string, UsageRecord> by_user;
    std::map<std::string, double> total_length;
    for (auto const & s : sessions) {
        auto & rec = by_user[s.user_id];
        rec.user_id = s.user_id;
        rec.total_queries += s.queries.size();
        rec.total_sessions += 1;
        total_length[s.user_id] += static_cast<double>(s.length_seconds);
    }
    std::vector<UsageRecord> out;
    out.reserve(by_user.size());
    for (auto & [user, rec] : by_user) {
        rec.avg_session_length_seconds = total_length[user] / static_cast<double>(rec.total_sessions);
        out.push_back(rec);
    }
    return out;
}

} // namespace tutorguard::analytics
