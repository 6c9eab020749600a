// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/dedup.hpp"
#include "tutorguard/utf8.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>

#include "support.hpp"

namespace tutorguard::analytics {
namespace {

// Independent oracle: the textbook recursive definition, memoized.
std::size_t levenshtein_oracle(std::u32string const & a, std::u32string const & b)
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == 0) return j;
        if (j == 0) return i;
        auto const key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::size_t const v = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                                        d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
        memo[key] = v;
        return v;
    };
    return d(a.size(), b.size());
}

TEST(Levenshtein, KnownValues)
{
    EXPECT_EQ(levenshtein(U"kitten", U"sitting"), 3u);
    EXPECT_EQ(levenshtein(U"", U"abc"), 3u);
    EXPECT_EQ(levenshtein(U"flaw", U"lawn"), 2u);
    EXPECT_EQ(levenshtein(U"héllo", U"hello"), 1u);
}

TEST(Levenshtein, MatchesRecursiveOracle)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto const a = utf8::decode_lossy(testing::random_string(rng, 14, "abcab "));
        auto const b = utf8::decode_lossy(testing::random_string(rng, 14, "abcd a"));
        ASSERT_EQ(levenshtein(a, b), levenshtein_oracle(a, b));
    }
}

TEST(NormalizedFieldDistance, Examples)
{
    EXPECT_EQ(normalized_field_distance("abc", "abc"), 0.0);
    EXPECT_EQ(normalized_field_distance("", ""), 0.0);
    EXPECT_DOUBLE_EQ(normalized_field_distance("abcdefghij", "abcdefgxyz"), 0.3);
    EXPECT_EQ(normalized_field_distance("", "abc"), 1.0);
    EXPECT_EQ(normalized_field_distance("abc", "xyz"), 1.0);
}

TEST(NormalizedFieldDistance, CountsCodePoints)
{
    EXPECT_DOUBLE_EQ(normalized_field_distance("é", "e"), 1.0);
    EXPECT_DOUBLE_EQ(normalized_field_distance("aé", "ae"), 0.5);
}

TEST(QuerySimilarity, Examples)
{
    auto const x = testing::query("a", "u", 0, "code", "err", "abcdefghij");
    EXPECT_EQ(query_similarity(x, x), 0.0);
    auto y = x;
    y.issue = "abcdefgxyz";
    EXPECT_DOUBLE_EQ(query_similarity(x, y), 0.3);
    auto const p = testing::query("a", "u", 0, "aaa", "bbb", "ccc");
    auto const q = testing::query("b", "u", 0, "xxx", "yyy", "zzz");
    EXPECT_EQ(query_similarity(p, q), 3.0);
}

TEST(QuerySimilarity, IsSymmetricAndBounded)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto const x = testing::query("a", "u", 0, testing::random_string(rng, 8, "ab"), testing::random_string(rng, 8, "abc"), testing::random_string(rng, 8, "xy"));
        auto const y = testing::query("b", "u", 0, testing::random_string(rng, 8, "ab"), testing::random_string(rng, 8, "abc"), testing::random_string(rng, 8, "xy"));
        double const s = query_similarity(x, y);
        ASSERT_EQ(s, query_similarity(y, x));
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 3.0);
    }
}

TEST(Deduplicate, IdenticalResubmissionDropped)
{
    std::vector<HelpRequest> const qs = {testing::query("q1", "u1", 0, "c", "e", "i"),
                                         testing::query("q2", "u1", 5, "c", "e", "i")};
    auto const r = deduplicate(qs);
    EXPECT_EQ(r.duplicate_count(), 1u);
    EXPECT_EQ(r.duplicate_ids, std::vector<std::string>{"q2"});
    ASSERT_EQ(r.kept.size(), 1u);
    EXPECT_EQ(r.kept[0].id, "q1");
}

TEST(Deduplicate, DifferentUsersBothKept)
{
    std::vector<HelpRequest> const qs = {testing::query("q1", "u1", 0, "c", "e", "i"),
                                         testing::query("q2", "u2", 5, "c", "e", "i")};
    EXPECT_EQ(deduplicate(qs).duplicate_count(), 0u);
}

TEST(Deduplicate, ThresholdIsStrict)
{
    // Similarity exactly 0.25 is not a duplicate at k = 0.25.
    std::vector<HelpRequest> const qs = {testing::query("q1", "u1", 0, "", "", "abcd"),
                                         testing::query("q2", "u1", 5, "", "", "abcx")};
    EXPECT_EQ(deduplicate(qs, {0.25}).duplicate_count(), 0u);
    EXPECT_EQ(deduplicate(qs, {0.26}).duplicate_count(), 1u);
}

TEST(Deduplicate, KZeroDropsNothing)
{
    std::vector<HelpRequest> const qs = {testing::query("q1", "u1", 0, "c", "e", "i"),
                                         testing::query("q2", "u1", 5, "c", "e", "i")};
    EXPECT_EQ(deduplicate(qs, {0.0}).duplicate_count(), 0u);
}

TEST(Deduplicate, ComparesAgainstLastKeptQuery)
{
    // q2 is near q1 and dropped; q3 is near q2 but compared with q1.
    std::vector<HelpRequest> const qs = {testing::query("q1", "u1", 0, "", "", "aaaaaaaaaa"),
                                         testing::query("q2", "u1", 1, "", "", "aaaaaaaabb"),
                                         testing::query("q3", "u1", 2, "", "", "aaaaaabbbb")};
    auto const r = deduplicate(qs, {0.25});
    EXPECT_EQ(r.duplicate_ids, std::vector<std::string>{"q2"});
    EXPECT_EQ(r.kept.size(), 2u);
}

TEST(Deduplicate, OrdersEachUserByTime)
{
    std::vector<HelpRequest> const qs = {testing::query("late", "u1", 50, "c", "e", "i"),
                                         testing::query("early", "u1", 10, "c", "e", "i")};
    EXPECT_EQ(deduplicate(qs).duplicate_ids, std::vector<std::string>{"late"});
}

TEST(Deduplicate, RejectsOutOfRangeK)
{
    EXPECT_THROW(validate(DedupConfig{-0.1}), std::invalid_argument);
    EXPECT_THROW(validate(DedupConfig{3.5}), std::invalid_argument);
    EXPECT_THROW(deduplicate({}, DedupConfig{-1}), std::invalid_argument);
}

} // namespace
} // namespace tutorguard::analytics
