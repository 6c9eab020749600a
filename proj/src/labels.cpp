// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/labels.hpp"

namespace tutorguard {

std::string_view category_name(Category c)
{
    switch (c) {
    case Category::debugging_error_only: return "Debugging:error_only";
    case Category::debugging_outcome_only: return "Debugging:outcome_only";
    case Category::debugging_error_and_outcome: return "Debugging:error_and_outcome";
    case Category::implementation: return "Implementation";
    case Category::understanding: return "Understanding";
    case Category::nothing: return "Nothing";
    case Category::off_topic: return "OffTopic";
    }
    return "";
}

std::optional<Category> parse_category(std::string_view name)
{
    for (auto c : all_categories) {
        if (category_name(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::string category_names()
{
    std::string out;
    for (auto c : all_categories) {
        if (!out.empty()) {
            out += ", ";
        }
        out += category_name(c);
    }
    return out;
}

bool is_debugging(Category c)
{
    return c == Category::debugging_error_only || c == Category::debugging_outcome_only
        || c == Category::debugging_error_and_outcome;
}

TopCategory top_level(Category c)
{
    switch (c) {
    case Category::debugging_error_only:
    case Category::debugging_outcome_only:
    case Category::debugging_error_and_outcome: return TopCategory::debugging;
    case Category::implementation: return TopCategory::implementation;
    case Category::understanding: return TopCategory::understanding;
    case Category::nothing: return TopCategory::nothing;
    case Category::off_topic: return TopCategory::off_topic;
    }
    return TopCategory::nothing;
}

std::string_view top_category_name(TopCategory c)
{
    switch (c) {
    case TopCategory::debugging: return "Debugging";
    case TopCategory::implementation: return "Implementation";
    case TopCategory::understanding: return "Understanding";
    case TopCategory::nothing: return "Nothing";
    case TopCategory::off_topic: return "OffTopic";
    }
    return "";
}

} // namespace tutorguard
