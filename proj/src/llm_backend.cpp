// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/llm_backend.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <fstream>
#include <thread>

namespace tutorguard {

std::string_view to_string(BackendErrorKind kind)
{
    switch (kind) {
    case BackendErrorKind::timeout: return "timeout";
    case BackendErrorKind::rate_limited: return "rate_limited";
    case BackendErrorKind::rejected: return "rejected";
    }
    return "unknown";
}

namespace {

BackendErrorKind parse_error_kind(std::string const & name)
{
    if (name == "timeout") return BackendErrorKind::timeout;
    if (name == "rate_limited") return BackendErrorKind::rate_limited;
    if (name == "rejected") return BackendErrorKind::rejected;
    throw std::invalid_argument(fmt::format("unknown backend error kind '{}'", name));
}

} // namespace

std::string CompletionBackend::complete(CompletionRequest const & request)
{
    if (request.prompt.empty()) {
        throw std::invalid_argument("completion prompt must be non-empty");
    }
    validate_params(request.params);
    return do_complete(request);
}

// ---------------------------------------------------------------------------
// MockBackend

MockBackend::MockBackend(std::vector<MockRule> rules, std::string fallback)
: rules_(std::move(rules))
, fallback_(std::move(fallback))
{}

std::unique_ptr<MockBackend> MockBackend::from_json(nlohmann::json const & j)
{
    std::vector<MockRule> rules;
    if (j.contains("rules")) {
        for (auto const & r : j.at("rules")) {
            MockRule rule;
            rule.contains = r.at("contains").get<std::string>();
            rule.response = r.value("response", std::string{});
            if (r.contains("error") && !r.at("error").is_null()) {
                rule.error = parse_error_kind(r.at("error").get<std::string>());
            }
            rule.delay = std::chrono::milliseconds{r.value("delay_ms", 0)};
            rules.push_back(std::move(rule));
        }
    }
    return std::make_unique<MockBackend>(
        std::move(rules), j.value("default", std::string{default_response}));
}

std::unique_ptr<MockBackend> MockBackend::load(std::filesystem::path const & path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(
            fmt::format("cannot read mock rules file '{}'", path.string()));
    }
    return from_json(nlohmann::json::parse(in));
}

std::vector<std::string> MockBackend::received() const
{
    std::lock_guard lock(mutex_);
    return received_;
}

std::size_t MockBackend::call_count() const
{
    std::lock_guard lock(mutex_);
    return received_.size();
}

std::string MockBackend::do_complete(CompletionRequest const & request)
{
    {
        std::lock_guard lock(mutex_);
        received_.push_back(request.prompt);
    }
    for (auto const & rule : rules_) {
        if (request.prompt.find(rule.contains) == std::string::npos) {
            continue;
        }
        if (rule.delay.count() > 0) {
            std::this_thread::sleep_for(rule.delay);
        }
        if (rule.error) {
            throw BackendError(
                *rule.error, request.prompt_id,
                fmt::format("scripted {} for prompt {}", to_string(*rule.error),
                            request.prompt_id));
        }
        return rule.response;
    }
    return fallback_;
}

// ---------------------------------------------------------------------------
// RemoteBackend

RemoteBackend::RemoteBackend(RemoteBackendConfig config)
: config_(std::move(config))
{
    if (config_.retries < 0) {
        throw std::invalid_argument("retries must be non-negative");
    }
}

nlohmann::json RemoteBackend::request_body(CompletionRequest const & request)
{
    return {
        {"model", request.params.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.params.temperature},
        {"max_tokens", request.params.max_tokens},
    };
}

std::string RemoteBackend::do_complete(CompletionRequest const & request)
{
    auto const body = request_body(request).dump();
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    std::optional<BackendError> last;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        httplib::Client client(config_.base_url);
        auto const secs = static_cast<time_t>(config_.timeout.count());
        client.set_connection_timeout(secs, 0);
        client.set_read_timeout(secs, 0);
        client.set_write_timeout(secs, 0);

        auto const res = client.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last.emplace(BackendErrorKind::timeout, request.prompt_id,
                         fmt::format("no response for prompt {}: {}", request.prompt_id,
                                     httplib::to_string(res.error())));
            continue;
        }
        if (res->status == 429) {
            last.emplace(BackendErrorKind::rate_limited, request.prompt_id,
                         fmt::format("rate limited on prompt {}", request.prompt_id));
            continue;
        }
        if (res->status >= 500) {
            last.emplace(BackendErrorKind::rejected, request.prompt_id,
                         fmt::format("backend returned HTTP {} for prompt {}",
                                     res->status, request.prompt_id));
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError(BackendErrorKind::rejected, request.prompt_id,
                               fmt::format("backend returned HTTP {} for prompt {}: {}",
                                           res->status, request.prompt_id, res->body));
        }
        try {
            auto const j = nlohmann::json::parse(res->body);
            auto const & choice = j.at("choices").at(0);
            if (choice.contains("message")) {
                return choice.at("message").at("content").get<std::string>();
            }
            return choice.at("text").get<std::string>();
        } catch (nlohmann::json::exception const & e) {
            throw BackendError(BackendErrorKind::rejected, request.prompt_id,
                               fmt::format("unparseable completion for prompt {}: {}",
                                           request.prompt_id, e.what()));
        }
    }
    throw *last;
}

} // namespace tutorguard
