// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/prompts.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace tutorguard {
namespace {

std::size_t occurrences(std::string const & haystack, std::string const & needle)
{
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

HelpRequest fig8_request()
{
    return testing::query("q1", "u1", 0, "def f(x):\nreturn x", "IndentationError: expected an indented block",
                          "why am i getting this error");
}

TEST(SufficiencyPrompt, EmptyRequestHasAllDelimiters)
{
    HelpRequest empty;
    auto const p = prompts::build_sufficiency_prompt(empty, {});
    for (char const * tag : {"<language></language>", "<code></code>", "<error></error>", "<issue></issue>"}) {
        EXPECT_NE(p.find(tag), std::string::npos) << tag;
    }
}

TEST(SufficiencyPrompt, IssueSectionIsVerbatim)
{
    auto const p = prompts::build_sufficiency_prompt(fig8_request(), {});
    EXPECT_NE(p.find("<issue>why am i getting this error</issue>"), std::string::npos);
}

TEST(SufficiencyPrompt, EndsWithInputs)
{
    auto const req = fig8_request();
    auto const p = prompts::build_sufficiency_prompt(req, {});
    EXPECT_TRUE(p.ends_with(prompts::delimited_inputs(req)));
    EXPECT_NE(p.find("end by writing \"OK.\""), std::string::npos);
}

TEST(MainPrompt, NoAvoidSentenceForEmptySet)
{
    auto const p = prompts::build_main_prompt(fig8_request(), {});
    EXPECT_EQ(p.find("Do not discuss or use"), std::string::npos);
    EXPECT_NE(p.find("Use Markdown formatting, including ` for inline code.\n\nDo not write any example code blocks."),
              std::string::npos);
}

TEST(MainPrompt, OneAvoidSentencePerTopic)
{
    ClassContext ctx;
    ctx.avoid_set = {"list comprehensions"};
    auto const p = prompts::build_main_prompt(fig8_request(), ctx);
    EXPECT_EQ(occurrences(p, "Do not discuss or use"), 1u);
    EXPECT_NE(p.find("Do not discuss or use list comprehensions in your response.\n\nDo not write any example code blocks."),
              std::string::npos);
    ctx.avoid_set = {"recursion", "lambda"};
    EXPECT_EQ(occurrences(prompts::build_main_prompt(fig8_request(), ctx), "Do not discuss or use"), 2u);
}

TEST(MainPrompt, ContainsNoCodeInstruction)
{
    auto const p = prompts::build_main_prompt(HelpRequest{}, {});
    EXPECT_NE(p.find("Do not write any example code blocks."), std::string::npos);
    EXPECT_NE(p.find("How would you respond to the student"), std::string::npos);
    EXPECT_EQ(p.find("{{"), std::string::npos);
}

TEST(RemovalPrompt, IsTemplatePlusOriginal)
{
    std::string const original = "Here:\n```\nprint(1)\n```\n";
    auto const p = prompts::build_removal_prompt(original);
    EXPECT_NE(p.find("does not provide solution code"), std::string::npos);
    auto const empty = prompts::build_removal_prompt("");
    EXPECT_EQ(p.size(), empty.size() + original.size());
    EXPECT_EQ(occurrences(p, "```\nprint(1)\n```"), 1u);
    EXPECT_TRUE(p.ends_with(original));
}

TEST(Render, SlotValuesAreNotReexpanded)
{
    EXPECT_EQ(prompts::render("a {{x}} b", {{"x", "{{y}}"}}), "a {{y}} b");
    EXPECT_THROW(prompts::render("{{missing}}", {}), std::invalid_argument);
}

TEST(Templates, VersionIsStamped)
{
    EXPECT_EQ(prompts::template_version, "tutorguard-prompts/1");
}

} // namespace
} // namespace tutorguard
