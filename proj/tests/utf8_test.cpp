// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/utf8.hpp"

#include <gtest/gtest.h>

namespace tutorguard {
namespace {

TEST(Utf8, DecodesMultibyteSequences)
{
    auto const d = utf8::decode("h\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80");
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(*d, (std::u32string{U'h', U'é', U'€', U'\U0001F600'}));
    EXPECT_EQ(utf8::encode(*d), "h\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80");
}

TEST(Utf8, RejectsMalformedInput)
{
    EXPECT_FALSE(utf8::is_valid("\xC3"));               // truncated
    EXPECT_FALSE(utf8::is_valid("\xC0\xAF"));           // overlong
    EXPECT_FALSE(utf8::is_valid("\xED\xA0\x80"));       // surrogate
    EXPECT_FALSE(utf8::is_valid("\xF4\x90\x80\x80"));   // above U+10FFFF
    EXPECT_FALSE(utf8::is_valid("\xFF"));
    EXPECT_TRUE(utf8::is_valid(""));
}

TEST(Utf8, LossyDecodeSubstitutesReplacementCharacter)
{
    EXPECT_EQ(utf8::decode_lossy("a\xFF" "b"), (std::u32string{U'a', U'�', U'b'}));
}

TEST(Utf8, LengthCountsCodePoints)
{
    EXPECT_EQ(utf8::length("why error"), 9u);
    EXPECT_EQ(utf8::length("\xC3\xA9\xC3\xA9"), 2u);
}

} // namespace
} // namespace tutorguard
