// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/query_model.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tutorguard {

enum class BackendErrorKind
{
    timeout,
    rate_limited,
    rejected,
};

std::string_view to_string(BackendErrorKind kind);

class BackendError : public std::runtime_error
{
public:
    BackendError(BackendErrorKind kind, std::string prompt_id, std::string const & message)
    : std::runtime_error(message)
    , kind_(kind)
    , prompt_id_(std::move(prompt_id))
    {}

    BackendErrorKind kind() const noexcept { return kind_; }
    std::string const & prompt_id() const noexcept { return prompt_id_; }

private:
    BackendErrorKind kind_;
    std::string prompt_id_;
};

struct CompletionRequest
{
    std::string prompt_id;      // caller-chosen tag echoed in errors
    std::string prompt;
    CompletionParams params;
};

/**
 * Text-completion backend.
 *
 * Implementations must tolerate concurrent calls to complete(); the
 * guardrail pipeline issues two at once per student query.
 */
class CompletionBackend
{
public:
    virtual ~CompletionBackend() = default;

    /// Throws std::invalid_argument for an empty prompt or bad params,
    /// BackendError for backend failures.
    std::string complete(CompletionRequest const & request);

private:
    virtual std::string do_complete(CompletionRequest const & request) = 0;
};

/// One scripted behavior: first rule whose `contains` is a substring of the
/// prompt wins. A rule either answers with `response` or fails with `error`.
struct MockRule
{
    std::string contains;
    std::string response;
    std::optional<BackendErrorKind> error;
    std::chrono::milliseconds delay{0};
};

/**
 * Deterministic scripted backend for tests and offline demos.
 *
 * JSON form:
 *   {"rules": [{"contains": "...", "response": "...",
 *               "error": "timeout|rate_limited|rejected", "delay_ms": 0}],
 *    "default": "MOCK RESPONSE"}
 */
class MockBackend final : public CompletionBackend
{
public:
    static constexpr char const * default_response = "MOCK RESPONSE";

    explicit MockBackend(std::vector<MockRule> rules = {},
                         std::string fallback = default_response);

    static std::unique_ptr<MockBackend> from_json(nlohmann::json const & j);
    static std::unique_ptr<MockBackend> load(std::filesystem::path const & path);

    /// Prompts received so far, in arrival order.
    std::vector<std::string> received() const;
    std::size_t call_count() const;

private:
    std::string do_complete(CompletionRequest const & request) override;

    std::vector<MockRule> rules_;
    std::string fallback_;
    mutable std::mutex mutex_;
    std::vector<std::string> received_;
};

struct RemoteBackendConfig
{
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::chrono::seconds timeout{60};
    int retries = 1;
};

/**
 * Chat-completions style HTTP JSON API.
 *
 * Connection failures and timeouts map to BackendErrorKind::timeout,
 * HTTP 429 to rate_limited, anything else non-2xx or unparseable to
 * rejected. Timeouts, 429 and 5xx are retried `retries` times.
 */
class RemoteBackend final : public CompletionBackend
{
public:
    explicit RemoteBackend(RemoteBackendConfig config);

    static nlohmann::json request_body(CompletionRequest const & request);

private:
    std::string do_complete(CompletionRequest const & request) override;

    RemoteBackendConfig config_;
};

} // namespace tutorguard
