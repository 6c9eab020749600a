// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/persistence.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tutorguard::analytics {

inline constexpr std::size_t short_issue_limit = 10;
inline constexpr double copied_threshold_percent = 80.0;

/// True iff the issue has fewer than 10 code points.
bool flag_short_issue(std::string_view issue);

struct MatchingBlock
{
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t size = 0;

    friend bool operator==(MatchingBlock const &, MatchingBlock const &) = default;
};

/**
 * Longest-matching-block decomposition of two sequences, the classic
 * Ratcliff/Obershelp recursion: take the longest common run (earliest in
 * `a`, then earliest in `b`, on ties), recurse on both sides of it.
 * No junk heuristics. Blocks are sorted and adjacent ones merged; no
 * zero-size sentinel is appended.
 */
std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b);

/// Percentage (0..100) of the issue's code points covered by matching
/// blocks against one exercise text.
double coverage_percent(std::u32string_view issue, std::u32string_view exercise);

/// Highest coverage over all exercises; 0 for an empty issue or no
/// exercises.
double copied_percentage(std::string_view issue, std::vector<ExerciseText> const & exercises);

struct AutoFlags
{
    bool short_issue = false;
    double copied_percentage = 0.0;
    bool copied = false;
};

/// Precomputes decoded exercise texts for repeated flagging.
class ExerciseIndex
{
public:
    explicit ExerciseIndex(std::vector<ExerciseText> const & exercises);

    double copied_percentage(std::string_view issue) const;
    AutoFlags flags(std::string_view issue) const;
    bool empty() const { return texts_.empty(); }

private:
    std::vector<std::u32string> texts_;
};

} // namespace tutorguard::analytics
