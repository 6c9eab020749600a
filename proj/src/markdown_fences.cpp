// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/markdown_fences.hpp"

#include <cctype>
#include <optional>

namespace tutorguard {

namespace {

struct Fence
{
    char ch;
    std::size_t length;
    std::string_view rest;
};

bool is_blank(char c) { return c == ' ' || c == '\t'; }

// Skips whitespace plus blockquote and list-item markers at line start.
std::size_t skip_container_prefix(std::string_view line)
{
    std::size_t pos = 0;
    for (;;) {
        while (pos < line.size() && is_blank(line[pos])) {
            ++pos;
        }
        if (pos >= line.size()) {
            return pos;
        }
        char const c = line[pos];
        if (c == '>') {
            ++pos;
            continue;
        }
        if ((c == '-' || c == '*' || c == '+') && pos + 1 < line.size()
            && is_blank(line[pos + 1]))
        {
            pos += 2;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t k = pos;
            while (k < line.size() && k - pos < 9
                   && std::isdigit(static_cast<unsigned char>(line[k])))
            {
                ++k;
            }
            if (k + 1 < line.size() && (line[k] == '.' || line[k] == ')')
                && is_blank(line[k + 1]))
            {
                pos = k + 2;
                continue;
            }
        }
        return pos;
    }
}

std::optional<Fence> fence_in(std::string_view line)
{
    std::size_t const pos = skip_container_prefix(line);
    if (pos >= line.size() || (line[pos] != '`' && line[pos] != '~')) {
        return std::nullopt;
    }
    char const ch = line[pos];
    std::size_t run = pos;
    while (run < line.size() && line[run] == ch) {
        ++run;
    }
    if (run - pos < 3) {
        return std::nullopt;
    }
    return Fence{ch, run - pos, line.substr(run)};
}

bool closes(Fence const & opener, std::string_view line)
{
    auto const f = fence_in(line);
    if (!f || f->ch != opener.ch || f->length < opener.length) {
        return false;
    }
    for (char c : f->rest) {
        if (!is_blank(c) && c != '\r') {
            return false;
        }
    }
    return true;
}

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

std::vector<CodeBlockSpan> detect_code_blocks(std::string_view markdown)
{
    std::vector<CodeBlockSpan> spans;
    std::optional<Fence> open;
    CodeBlockSpan current;

    std::size_t line_start = 0;
    while (line_start <= markdown.size()) {
        std::size_t nl = markdown.find('\n', line_start);
        std::size_t const line_end = nl == std::string_view::npos ? markdown.size() : nl;
        std::string_view const line = markdown.substr(line_start, line_end - line_start);

        if (!open) {
            if (auto f = fence_in(line)) {
                open = f;
                current = CodeBlockSpan{};
                current.start = line_start;
                current.fence_char = f->ch;
                current.fence_length = f->length;
                current.info = trim(f->rest);
            }
        } else if (closes(*open, line)) {
            current.end = line_end;
            current.closed = true;
            spans.push_back(std::move(current));
            open.reset();
        }

        if (nl == std::string_view::npos) {
            break;
        }
        line_start = nl + 1;
    }

    if (open) {
        current.end = markdown.size();
        current.closed = false;
        spans.push_back(std::move(current));
    }
    return spans;
}

std::string strip_code_blocks(std::string_view markdown)
{
    std::string text(markdown);
    // Each pass removes whole fence-delimited line ranges; lines outside
    // blocks are never fence openers, so one pass normally suffices.
    for (auto spans = detect_code_blocks(text); !spans.empty();
         spans = detect_code_blocks(text))
    {
        for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
            text.replace(it->start, it->end - it->start, code_removed_placeholder);
        }
    }
    return text;
}

} // namespace tutorguard
