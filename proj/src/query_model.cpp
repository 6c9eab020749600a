// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/query_model.hpp"

#include "tutorguard/utf8.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <memory>

namespace tutorguard {

namespace chrono = std::chrono;

std::string format_timestamp(Timestamp t)
{
    auto const day = chrono::floor<chrono::days>(t);
    chrono::year_month_day const ymd{day};
    chrono::hh_mm_ss const hms{t - day};
    return fmt::format(
        "{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z",
        static_cast<int>(ymd.year()),
        static_cast<unsigned>(ymd.month()),
        static_cast<unsigned>(ymd.day()),
        hms.hours().count(),
        hms.minutes().count(),
        hms.seconds().count());
}

std::optional<Timestamp> parse_timestamp(std::string_view text)
{
    // YYYY-MM-DDTHH:MM:SS followed by Z or +00:00
    if (text.size() != 20 && text.size() != 25) {
        return std::nullopt;
    }
    auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
        int v = 0;
        for (std::size_t k = pos; k < pos + n; ++k) {
            if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
                return std::nullopt;
            }
            v = v * 10 + (text[k] - '0');
        }
        return v;
    };
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't')
        || text[13] != ':' || text[16] != ':')
    {
        return std::nullopt;
    }
    std::string_view const zone = text.substr(19);
    if (zone != "Z" && zone != "z" && zone != "+00:00") {
        return std::nullopt;
    }
    auto const y = digits(0, 4);
    auto const mo = digits(5, 2);
    auto const d = digits(8, 2);
    auto const h = digits(11, 2);
    auto const mi = digits(14, 2);
    auto const s = digits(17, 2);
    if (!y || !mo || !d || !h || !mi || !s) {
        return std::nullopt;
    }
    chrono::year_month_day const ymd{
        chrono::year{*y}, chrono::month{static_cast<unsigned>(*mo)},
        chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 59) {
        return std::nullopt;
    }
    return chrono::sys_days{ymd} + chrono::hours{*h} + chrono::minutes{*mi}
        + chrono::seconds{*s};
}

void validate_params(CompletionParams const & params)
{
    if (!(params.temperature >= 0.0 && params.temperature <= 2.0)) {
        throw std::invalid_argument(fmt::format(
            "temperature must be in [0, 2], got {}", params.temperature));
    }
    if (params.max_tokens < 1) {
        throw std::invalid_argument(fmt::format(
            "max_tokens must be at least 1, got {}", params.max_tokens));
    }
}

namespace {

std::string trim(std::string_view s)
{
    auto const space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto b = std::find_if_not(s.begin(), s.end(), space);
    auto e = std::find_if_not(s.rbegin(), s.rend(), space).base();
    return b < e ? std::string(b, e) : std::string{};
}

} // namespace

ClassContext normalized(ClassContext ctx)
{
    for (auto & topic : ctx.avoid_set) {
        topic = trim(topic);
        if (topic.empty()) {
            throw std::invalid_argument("avoid_set entries must be non-empty");
        }
    }
    validate_params(ctx.backend_params);
    return ctx;
}

std::function<std::string()> sequential_ids(std::string prefix, std::size_t start)
{
    auto counter = std::make_shared<std::atomic<std::size_t>>(start);
    return [prefix = std::move(prefix), counter] {
        return fmt::format("{}{:06d}", prefix, counter->fetch_add(1));
    };
}

Timestamp system_now()
{
    return chrono::floor<chrono::seconds>(chrono::system_clock::now());
}

std::string normalize_trailing_newlines(std::string text)
{
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.pop_back();
    }
    return text;
}

HelpRequest validate_request(RawRequest const & raw, RequestEnvironment const & env)
{
    struct Field
    {
        char const * name;
        std::string const * value;
    };
    Field const fields[] = {
        {"user_id", &raw.user_id},
        {"language", &raw.language},
        {"code", &raw.code},
        {"error", &raw.error},
        {"issue", &raw.issue},
    };
    for (auto const & f : fields) {
        if (f.value->size() > env.max_field_bytes) {
            throw ValidationError(
                ValidationError::Kind::oversized_field, f.name,
                fmt::format("field '{}' is {} bytes; the limit is {} bytes",
                            f.name, f.value->size(), env.max_field_bytes));
        }
        if (!utf8::is_valid(*f.value)) {
            throw ValidationError(
                ValidationError::Kind::invalid_encoding, f.name,
                fmt::format("field '{}' is not valid UTF-8", f.name));
        }
    }

    HelpRequest req;
    if (raw.timestamp) {
        auto const ts = parse_timestamp(*raw.timestamp);
        if (!ts) {
            throw ValidationError(
                ValidationError::Kind::malformed_timestamp, "timestamp",
                fmt::format("malformed timestamp '{}'", *raw.timestamp));
        }
        req.timestamp = *ts;
    } else {
        req.timestamp = env.now ? env.now() : system_now();
    }
    req.id = env.next_id();
    req.user_id = raw.user_id;
    req.language = normalize_trailing_newlines(raw.language);
    req.code = normalize_trailing_newlines(raw.code);
    req.error = normalize_trailing_newlines(raw.error);
    req.issue = normalize_trailing_newlines(raw.issue);
    return req;
}

nlohmann::ordered_json to_json(HelpRequest const & req)
{
    nlohmann::ordered_json j;
    j["id"] = req.id;
    j["user_id"] = req.user_id;
    j["timestamp"] = format_timestamp(req.timestamp);
    j["language"] = req.language;
    j["code"] = req.code;
    j["error"] = req.error;
    j["issue"] = req.issue;
    return j;
}

HelpRequest help_request_from_json(nlohmann::json const & j)
{
    HelpRequest req;
    req.id = j.at("id").get<std::string>();
    req.user_id = j.at("user_id").get<std::string>();
    auto const text = j.at("timestamp").get<std::string>();
    auto const ts = parse_timestamp(text);
    if (!ts) {
        throw ValidationError(ValidationError::Kind::malformed_timestamp,
                              "timestamp",
                              fmt::format("malformed timestamp '{}'", text));
    }
    req.timestamp = *ts;
    req.language = j.at("language").get<std::string>();
    req.code = j.at("code").get<std::string>();
    req.error = j.at("error").get<std::string>();
    req.issue = j.at("issue").get<std::string>();
    return req;
}

} // namespace tutorguard
