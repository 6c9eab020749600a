// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/guardrail.hpp"
#include "tutorguard/persistence.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace httplib {
class Server;
}

namespace tutorguard::service {

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Principals and tokens

enum class Role
{
    student,
    instructor,
};

std::string_view role_name(Role r);
std::optional<Role> parse_role(std::string_view name);

struct Principal
{
    std::string user_id;
    Role role = Role::student;
    std::string token;
};

/// Static bearer tokens, one per user. File shape:
/// {"tokens": [{"token": "...", "user_id": "...", "role": "student"}]}
class TokenRegistry
{
public:
    TokenRegistry() = default;
    explicit TokenRegistry(std::vector<Principal> principals);

    static TokenRegistry from_json(nlohmann::json const & j);
    static TokenRegistry load(std::filesystem::path const & path);

    nlohmann::ordered_json to_json() const;
    void save(std::filesystem::path const & path) const;

    std::optional<Principal> authenticate(std::string_view token) const;
    std::optional<Principal> find_user(std::string_view user_id) const;

    /// Adds a principal with a fresh random token unless the user already
    /// has one; returns the user's principal either way.
    Principal provision(std::string const & user_id, Role role);

    std::vector<Principal> const & principals() const { return principals_; }

private:
    std::vector<Principal> principals_;
};

/// 32 hex characters from a cryptographic RNG.
std::string random_token();

// ---------------------------------------------------------------------------
// Configuration

struct BackendConfig
{
    std::string kind = "mock";                  // "mock" or "remote"
    std::filesystem::path rules;                // mock: rules file; empty = fallback text only
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";
    int timeout_seconds = 60;
    int retries = 1;
};

struct ServiceConfig
{
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "data";
    std::filesystem::path tokens_file = "tokens.json";
    std::optional<std::filesystem::path> exercises_dir;
    ClassContext initial_class;
    BackendConfig chat;
    std::optional<BackendConfig> rewrite;       // defaults to chat
    CompletionParams rewrite_params;
    std::size_t max_field_bytes = default_max_field_bytes;
};

/// Relative paths resolve against `base_dir`.
ServiceConfig parse_service_config(nlohmann::json const & j,
                                   std::filesystem::path const & base_dir = ".");
ServiceConfig load_service_config(std::filesystem::path const & path);

using EnvLookup = std::function<std::optional<std::string>(std::string const &)>;

std::optional<std::string> process_env(std::string const & name);

/// Throws ConfigError naming the missing environment variable when a
/// remote backend has no credential.
std::shared_ptr<CompletionBackend> make_backend(BackendConfig const & config,
                                                EnvLookup const & env = process_env);

Backends make_backends(ServiceConfig const & config, EnvLookup const & env = process_env);

// ---------------------------------------------------------------------------
// Service

/**
 * HTTP JSON API over one class. Files under data_dir: queries.jsonl,
 * labels.jsonl, performance.csv, class.json.
 */
class Service
{
public:
    Service(ServiceConfig config, Backends backends, TokenRegistry tokens);
    ~Service();

    Service(Service const &) = delete;
    Service & operator=(Service const &) = delete;

    /// Installs the /api routes on `server`.
    void mount(httplib::Server & server);

    /// Blocks until stop(). Returns false if the address cannot be bound.
    bool listen();
    /// Binds an ephemeral port on host and returns it; serve with run().
    int bind_any_port();
    bool run();
    void stop();
    bool running() const;

    LogStore & log();
    ClassContext class_context() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tutorguard::service
