// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/query_model.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace tutorguard {
namespace {

RequestEnvironment fixed_env()
{
    RequestEnvironment env;
    env.next_id = sequential_ids("q");
    env.now = [] { return testing::at(0); };
    return env;
}

TEST(ValidateRequest, AcceptsEmptySubmission)
{
    RawRequest raw{"u1", "Python", "", "", "", std::nullopt};
    auto const req = validate_request(raw, fixed_env());
    EXPECT_EQ(req.id, "q000001");
    EXPECT_EQ(req.language, "Python");
    EXPECT_TRUE(req.code.empty());
    EXPECT_TRUE(req.error.empty());
    EXPECT_TRUE(req.issue.empty());
    EXPECT_EQ(req.timestamp, testing::at(0));
}

TEST(ValidateRequest, KeepsShortIssueVerbatim)
{
    RawRequest raw{"u1", "Python", "", "", "why error", std::nullopt};
    EXPECT_EQ(validate_request(raw, fixed_env()).issue, "why error");
}

TEST(ValidateRequest, StoresFieldsVerbatimExceptTrailingNewlines)
{
    RawRequest raw{"u1", "Python", "  x = 1\r\n\tprint(x)  \n\n", "", "  padded  ", std::nullopt};
    auto const req = validate_request(raw, fixed_env());
    EXPECT_EQ(req.code, "  x = 1\r\n\tprint(x)  ");
    EXPECT_EQ(req.issue, "  padded  ");
}

TEST(ValidateRequest, FieldSizeLimitIsInclusive)
{
    RawRequest raw{"u1", "Python", std::string(64 * 1024, 'x'), "", "", std::nullopt};
    EXPECT_NO_THROW(validate_request(raw, fixed_env()));
    raw.code.push_back('x');
    try {
        validate_request(raw, fixed_env());
        FAIL() << "expected oversized_field";
    } catch (ValidationError const & e) {
        EXPECT_EQ(e.kind(), ValidationError::Kind::oversized_field);
        EXPECT_EQ(e.field(), "code");
    }
}

TEST(ValidateRequest, RejectsInvalidUtf8)
{
    RawRequest raw{"u1", "Python", "", "\xFF", "", std::nullopt};
    try {
        validate_request(raw, fixed_env());
        FAIL() << "expected invalid_encoding";
    } catch (ValidationError const & e) {
        EXPECT_EQ(e.kind(), ValidationError::Kind::invalid_encoding);
        EXPECT_EQ(e.field(), "error");
    }
}

TEST(ValidateRequest, ParsesExplicitTimestamp)
{
    RawRequest raw{"u1", "Python", "", "", "", "2023-02-06T08:00:10Z"};
    EXPECT_EQ(validate_request(raw, fixed_env()).timestamp, testing::at(10));
    raw.timestamp = "2023-02-06T08:00:10+00:00";
    EXPECT_EQ(validate_request(raw, fixed_env()).timestamp, testing::at(10));
    for (char const * bad : {"2023-02-30T08:00:00Z", "2023-02-06 08:00:00Z", "2023-02-06T08:00:00+01:00", ""}) {
        raw.timestamp = bad;
        try {
            validate_request(raw, fixed_env());
            FAIL() << bad;
        } catch (ValidationError const & e) {
            EXPECT_EQ(e.kind(), ValidationError::Kind::malformed_timestamp) << bad;
        }
    }
}

TEST(Timestamp, FormatRoundTrips)
{
    EXPECT_EQ(format_timestamp(testing::at(0)), "2023-02-06T08:00:00Z");
    EXPECT_EQ(parse_timestamp("2023-02-06T08:00:00Z"), testing::at(0));
}

TEST(HelpRequestJson, RoundTrips)
{
    auto const req = testing::query("q1", "u1", 5, "x = 1", "NameError", "why?");
    EXPECT_EQ(help_request_from_json(to_json(req)), req);
    EXPECT_EQ(to_json(req).dump(),
              R"({"id":"q1","user_id":"u1","timestamp":"2023-02-06T08:00:05Z","language":"Python","code":"x = 1","error":"NameError","issue":"why?"})");
}

TEST(CompletionParams, ValidatesRanges)
{
    CompletionParams p;
    EXPECT_NO_THROW(validate_params(p));
    p.temperature = 2.0;
    EXPECT_NO_THROW(validate_params(p));
    p.temperature = 5.0;
    EXPECT_THROW(validate_params(p), std::invalid_argument);
    p.temperature = 0.25;
    p.max_tokens = 0;
    EXPECT_THROW(validate_params(p), std::invalid_argument);
}

TEST(ClassContext, NormalizesAvoidSet)
{
    ClassContext ctx;
    ctx.avoid_set = {"  recursion ", "list comprehensions"};
    EXPECT_EQ(normalized(ctx).avoid_set, (std::vector<std::string>{"recursion", "list comprehensions"}));
    ctx.avoid_set = {"   "};
    EXPECT_THROW(normalized(ctx), std::invalid_argument);
}

} // namespace
} // namespace tutorguard
