// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tutorguard {

/// Manual query categories. The three Debugging values are subcategories
/// of the top-level Debugging category.
enum class Category
{
    debugging_error_only,
    debugging_outcome_only,
    debugging_error_and_outcome,
    implementation,
    understanding,
    nothing,
    off_topic,
};

inline constexpr std::array<Category, 7> all_categories = {
    Category::debugging_error_only,
    Category::debugging_outcome_only,
    Category::debugging_error_and_outcome,
    Category::implementation,
    Category::understanding,
    Category::nothing,
    Category::off_topic,
};

/// Wire names: "Debugging:error_only", "Implementation", "OffTopic", ...
std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

/// Comma-separated list of every wire name, for error messages.
std::string category_names();

bool is_debugging(Category c);

/// Debugging subcategories collapse to one value; others map to themselves.
enum class TopCategory
{
    debugging,
    implementation,
    understanding,
    nothing,
    off_topic,
};

TopCategory top_level(Category c);
std::string_view top_category_name(TopCategory c);

struct QueryLabel
{
    std::string query_id;
    std::string rater_id;
    Category category = Category::nothing;

    friend bool operator==(QueryLabel const &, QueryLabel const &) = default;
};

} // namespace tutorguard
