// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/flags.hpp"
#include "tutorguard/utf8.hpp"

#include <gtest/gtest.h>

namespace tutorguard::analytics {
namespace {

std::vector<MatchingBlock> blocks(std::string_view a, std::string_view b)
{
    return matching_blocks(utf8::decode_lossy(a), utf8::decode_lossy(b));
}

TEST(ShortIssue, StrictlyLessThanTen)
{
    EXPECT_TRUE(flag_short_issue(""));
    EXPECT_TRUE(flag_short_issue("why error"));
    EXPECT_FALSE(flag_short_issue("why errors"));
    EXPECT_TRUE(flag_short_issue("ééééééééé"));     // 9 code points, 18 bytes
}

// Expected blocks from Python's difflib.SequenceMatcher(None, a, b,
// autojunk=False).get_matching_blocks(), sentinel removed.
TEST(MatchingBlocks, AgreeWithDifflib)
{
    EXPECT_EQ(blocks("abxcd", "abcd"), (std::vector<MatchingBlock>{{0, 0, 2}, {3, 2, 2}}));
    EXPECT_EQ(blocks("How do I write a function", "Write a fruitful function called f"),
              (std::vector<MatchingBlock>{{10, 1, 6}, {16, 16, 9}}));
    EXPECT_EQ(blocks("the cat sat on the mat", "a cat sat upon a mat"),
              (std::vector<MatchingBlock>{{3, 1, 9}, {12, 12, 3}, {18, 16, 4}}));
    EXPECT_EQ(blocks("aaaa", "aa"), (std::vector<MatchingBlock>{{0, 0, 2}}));
    EXPECT_TRUE(blocks("qwerty", "asdfgh").empty());
    EXPECT_EQ(blocks("héllo wörld", "hello world"),
              (std::vector<MatchingBlock>{{0, 0, 1}, {2, 2, 5}, {8, 8, 3}}));
}

TEST(Coverage, AgreesWithDifflib)
{
    auto cov = [](std::string_view a, std::string_view b) {
        return coverage_percent(utf8::decode_lossy(a), utf8::decode_lossy(b));
    };
    EXPECT_DOUBLE_EQ(cov("abxcd", "abcd"), 80.0);
    EXPECT_DOUBLE_EQ(cov("How do I write a function", "Write a fruitful function called f"), 60.0);
    EXPECT_DOUBLE_EQ(cov("the cat sat on the mat", "a cat sat upon a mat"), 1600.0 / 22.0);
    EXPECT_DOUBLE_EQ(cov("héllo wörld", "hello world"), 900.0 / 11.0);
    EXPECT_EQ(cov("", "anything"), 0.0);
}

std::vector<ExerciseText> const exercises = {
    {"ex1", "Write a fruitful function called middle_remover() that takes a list called items as an argument. "
            "If the list has an even number of elements, return the list with the middle two elements removed. "
            "Otherwise return the list with the single middle element removed."},
    {"ex2", "Write a program that reads a file of numbers and prints the largest and smallest value."},
};

TEST(CopiedPercentage, ExactCopyIs100)
{
    for (auto const & e : exercises) EXPECT_DOUBLE_EQ(copied_percentage(e.text, exercises), 100.0);
}

TEST(CopiedPercentage, UnrelatedTextIsNearZero)
{
    EXPECT_LT(copied_percentage("zzz qqq", exercises), 30.0);
    EXPECT_EQ(copied_percentage("QQQQ", exercises), 0.0);
}

TEST(CopiedPercentage, HowDoIPrefixIsFlagged)
{
    ASSERT_GE(exercises[0].text.size(), 200u);
    ExerciseIndex const index(exercises);
    auto const f = index.flags("How do I " + exercises[0].text);
    EXPECT_GT(f.copied_percentage, 80.0);
    EXPECT_TRUE(f.copied);
    EXPECT_FALSE(f.short_issue);
}

TEST(CopiedPercentage, NoExercisesIsZero)
{
    ExerciseIndex const index({});
    EXPECT_TRUE(index.empty());
    EXPECT_EQ(index.copied_percentage("anything"), 0.0);
}

} // namespace
} // namespace tutorguard::analytics
