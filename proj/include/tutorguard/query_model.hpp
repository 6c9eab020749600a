// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tutorguard {

using Timestamp = std::chrono::sys_seconds;

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

/// Accepts "YYYY-MM-DDTHH:MM:SSZ" (the 'Z' may also be written "+00:00").
/// Returns nullopt for anything else, including out-of-range calendar dates.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// One student help request: the four form inputs plus who and when.
struct HelpRequest
{
    std::string id;
    std::string user_id;
    Timestamp timestamp{};
    std::string language;
    std::string code;
    std::string error;
    std::string issue;

    friend bool operator==(HelpRequest const &, HelpRequest const &) = default;
};

/// Sampling parameters for one completion role.
struct CompletionParams
{
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.25;
    int max_tokens = 1000;

    friend bool operator==(CompletionParams const &, CompletionParams const &) = default;
};

/// Throws std::invalid_argument when temperature is outside [0, 2] or
/// max_tokens < 1.
void validate_params(CompletionParams const & params);

struct TraceEntry
{
    std::string stage;      // "sufficiency", "main" or "rewrite"
    std::string prompt;
    std::string completion;
    std::optional<std::string> note;

    friend bool operator==(TraceEntry const &, TraceEntry const &) = default;
};

struct AssistanceResponse
{
    std::string request_id;
    std::string main_text;
    std::optional<std::string> clarification_text;
    bool code_was_removed = false;
    bool fallback_strip_applied = false;
    std::string template_version;
    std::vector<TraceEntry> trace;

    friend bool operator==(AssistanceResponse const &, AssistanceResponse const &) = default;
};

/// Instructor configuration for the (single) class served by an instance.
struct ClassContext
{
    std::string class_id = "default";
    std::string name;
    std::vector<std::string> avoid_set;
    CompletionParams backend_params;
};

/// Trims avoid_set entries and rejects empty ones; validates params.
/// Throws std::invalid_argument.
ClassContext normalized(ClassContext ctx);

struct RawRequest
{
    std::string user_id;
    std::string language;
    std::string code;
    std::string error;
    std::string issue;
    std::optional<std::string> timestamp;   // server clock when absent
};

class ValidationError : public std::runtime_error
{
public:
    enum class Kind
    {
        malformed_timestamp,
        oversized_field,
        invalid_encoding,
    };

    ValidationError(Kind kind, std::string field, std::string const & message)
    : std::runtime_error(message)
    , kind_(kind)
    , field_(std::move(field))
    {}

    Kind kind() const noexcept { return kind_; }
    std::string const & field() const noexcept { return field_; }

private:
    Kind kind_;
    std::string field_;
};

inline constexpr std::size_t default_max_field_bytes = 64 * 1024;

/// Sources of identity and time for validate_request. Fixing both makes
/// validation deterministic.
struct RequestEnvironment
{
    std::function<std::string()> next_id;
    std::function<Timestamp()> now;
    std::size_t max_field_bytes = default_max_field_bytes;
};

/// Id source producing prefix + zero-padded counter ("q000001", ...).
std::function<std::string()> sequential_ids(std::string prefix, std::size_t start = 1);

/// Wall clock truncated to whole seconds.
Timestamp system_now();

/// Builds a HelpRequest. Content fields are kept verbatim except that
/// trailing line breaks are removed. Empty fields are accepted.
/// Throws ValidationError.
HelpRequest validate_request(RawRequest const & raw, RequestEnvironment const & env);

/// Strips trailing "\n" / "\r\n" / "\r" sequences.
std::string normalize_trailing_newlines(std::string text);

nlohmann::ordered_json to_json(HelpRequest const & req);
HelpRequest help_request_from_json(nlohmann::json const & j);

} // namespace tutorguard
