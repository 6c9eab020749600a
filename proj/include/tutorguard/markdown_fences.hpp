// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tutorguard {

/// A fenced code block inside a markdown text. [start, end) covers the
/// opening fence line through the end of the closing fence line (or the
/// end of the text for an unterminated fence), excluding the final newline.
struct CodeBlockSpan
{
    std::size_t start = 0;
    std::size_t end = 0;
    char fence_char = '`';
    std::size_t fence_length = 3;
    std::string info;           // language tag, possibly empty
    bool closed = true;

    friend bool operator==(CodeBlockSpan const &, CodeBlockSpan const &) = default;
};

/**
 * Finds every fenced block (``` or ~~~, three or more) in `markdown`.
 *
 * Fence lines are recognized after any leading whitespace, blockquote
 * markers, and list-item markers, so fences nested in lists or quotes
 * count. A fence left open runs to the end of the text. Inline code
 * (backticks that do not start a line) is not a block, and indented code
 * without a fence is ignored.
 */
std::vector<CodeBlockSpan> detect_code_blocks(std::string_view markdown);

inline constexpr std::string_view code_removed_placeholder = "[code removed]";

/// Replaces each fenced block with code_removed_placeholder. The result
/// contains no fenced blocks.
std::string strip_code_blocks(std::string_view markdown);

} // namespace tutorguard
