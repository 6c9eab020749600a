// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/flags.hpp"

#include "tutorguard/utf8.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace tutorguard::analytics {

bool flag_short_issue(std::string_view issue)
{
    return utf8::length(issue) < short_issue_limit;
}

namespace {

class Matcher
{
public:
    Matcher(std::u32string_view a, std::u32string_view b)
    : a_(a)
    , b_(b)
    , len_(b.size() + 1, 0)
    , next_len_(b.size() + 1, 0)
    {
        for (std::size_t j = 0; j < b.size(); ++j) {
            positions_[b[j]].push_back(j);
        }
    }

    // Longest a[i:i+k] == b[j:j+k] inside the window; earliest i then j.
    MatchingBlock longest(std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi)
    {
        MatchingBlock best{alo, blo, 0};
        // len_[j + 1] holds the run length ending at (i - 1, j).
        std::vector<std::size_t> touched;
        std::vector<std::size_t> next_touched;
        for (std::size_t i = alo; i < ahi; ++i) {
            next_touched.clear();
            auto const it = positions_.find(a_[i]);
            if (it != positions_.end()) {
                for (std::size_t j : it->second) {
                    if (j < blo) continue;
                    if (j >= bhi) break;
                    std::size_t const k = len_[j] + 1;   // run ending at (i-1, j-1), extended
                    next_len_[j + 1] = k;
                    next_touched.push_back(j + 1);
                    if (k > best.size) {
                        best = {i + 1 - k, j + 1 - k, k};
                    }
                }
            }
            for (std::size_t t : touched) len_[t] = 0;
            for (std::size_t t : next_touched) {
                len_[t] = next_len_[t];
                next_len_[t] = 0;
            }
            std::swap(touched, next_touched);
        }
        for (std::size_t t : touched) len_[t] = 0;
        return best;
    }

private:
    std::u32string_view a_;
    std::u32string_view b_;
    std::unordered_map<char32_t, std::vector<std::size_t>> positions_;
    std::vector<std::size_t> len_;
    std::vector<std::size_t> next_len_;
};

} // namespace

std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b)
{
    Matcher matcher(a, b);
    std::vector<MatchingBlock> blocks;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> pending{
        {0, a.size(), 0, b.size()}};
    while (!pending.empty()) {
        auto const [alo, ahi, blo, bhi] = pending.back();
        pending.pop_back();
        auto const m = matcher.longest(alo, ahi, blo, bhi);
        if (m.size == 0) continue;
        blocks.push_back(m);
        if (alo < m.a && blo < m.b) {
            pending.emplace_back(alo, m.a, blo, m.b);
        }
        if (m.a + m.size < ahi && m.b + m.size < bhi) {
            pending.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
        }
    }
    std::sort(blocks.begin(), blocks.end(), [](auto const & l, auto const & r) {
        return std::tie(l.a, l.b, l.size) < std::tie(r.a, r.b, r.size);
    });

    std::vector<MatchingBlock> merged;
    for (auto const & blk : blocks) {
        if (!merged.empty() && merged.back().a + merged.back().size == blk.a
            && merged.back().b + merged.back().size == blk.b)
        {
            merged.back().size += blk.size;
        } else {
            merged.push_back(blk);
        }
    }
    return merged;
}

double coverage_percent(std::u32string_view issue, std::u32string_view exercise)
{
    if (issue.empty()) {
        return 0.0;
    }
    std::size_t matched = 0;
    for (auto const & blk : matching_blocks(issue, exercise)) matched += blk.size;
    return 100.0 * static_cast<double>(matched) / static_cast<double>(issue.size());
}

double copied_percentage(std::string_view issue, std::vector<ExerciseText> const & exercises)
{
    return ExerciseIndex(exercises).copied_percentage(issue);
}

ExerciseIndex::ExerciseIndex(std::vector<ExerciseText> const & exercises)
{
    texts_.reserve(exercises.size());
    for (auto const & e : exercises) texts_.push_back(utf8::decode_lossy(e.text));
}

double ExerciseIndex::copied_percentage(std::string_view issue) const
{
    auto const text = utf8::decode_lossy(issue);
    double best = 0.0;
    for (auto const & ex : texts_) {
        best = std::max(best, coverage_percent(text, ex));
        if (best >= 100.0) break;
    }
    return best;
}

AutoFlags ExerciseIndex::flags(std::string_view issue) const
{
    AutoFlags f;
    f.short_issue = flag_short_issue(issue);
    f.copied_percentage = copied_percentage(issue);
    f.copied = f.copied_percentage >= copied_threshold_percent;
    return f;
}

} // namespace tutorguard::analytics
