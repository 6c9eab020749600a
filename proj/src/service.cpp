// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/service.hpp"

#include "tutorguard/analytics/errors.hpp"
#include "tutorguard/analytics/report.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/rand.h>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

namespace tutorguard::service {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view role_name(Role r)
{
    return r == Role::instructor ? "instructor" : "student";
}

std::optional<Role> parse_role(std::string_view name)
{
    if (name == "student") return Role::student;
    if (name == "instructor") return Role::instructor;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokens

std::string random_token()
{
    unsigned char bytes[16];
    if (RAND_bytes(bytes, sizeof bytes) != 1) {
        throw std::runtime_error("cannot draw random bytes for a token");
    }
    std::string out;
    for (unsigned char b : bytes) out += fmt::format("{:02x}", b);
    return out;
}

TokenRegistry::TokenRegistry(std::vector<Principal> principals)
: principals_(std::move(principals))
{
    std::set<std::string> tokens;
    std::set<std::string> users;
    for (auto const & p : principals_) {
        if (p.token.empty() || p.user_id.empty()) {
            throw ConfigError("token entries need a non-empty token and user_id");
        }
        if (!tokens.insert(p.token).second) {
            throw ConfigError(fmt::format("token for user '{}' is not unique", p.user_id));
        }
        if (!users.insert(p.user_id).second) {
            throw ConfigError(fmt::format("user '{}' has more than one token", p.user_id));
        }
    }
}

TokenRegistry TokenRegistry::from_json(json const & j)
{
    std::vector<Principal> out;
    if (!j.is_object() || !j.contains("tokens") || !j.at("tokens").is_array()) {
        throw ConfigError("tokens file must be an object with a \"tokens\" array");
    }
    for (auto const & e : j.at("tokens")) {
        Principal p;
        try {
            p.token = e.at("token").get<std::string>();
            p.user_id = e.at("user_id").get<std::string>();
            auto const role = e.value("role", std::string("student"));
            auto const r = parse_role(role);
            if (!r) throw ConfigError(fmt::format("unknown role '{}'", role));
            p.role = *r;
        } catch (json::exception const & ex) {
            throw ConfigError(fmt::format("bad token entry: {}", ex.what()));
        }
        out.push_back(std::move(p));
    }
    return TokenRegistry(std::move(out));
}

TokenRegistry TokenRegistry::load(std::filesystem::path const & path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read tokens file {}", path.string()));
    try {
        return from_json(json::parse(in));
    } catch (json::parse_error const & e) {
        throw ConfigError(fmt::format("tokens file {}: {}", path.string(), e.what()));
    }
}

ordered_json TokenRegistry::to_json() const
{
    ordered_json arr = ordered_json::array();
    for (auto const & p : principals_) {
        arr.push_back({{"token", p.token}, {"user_id", p.user_id}, {"role", role_name(p.role)}});
    }
    return {{"tokens", arr}};
}

void TokenRegistry::save(std::filesystem::path const & path) const
{
    write_file_atomic(path, to_json().dump(2) + "\n");
}

std::optional<Principal> TokenRegistry::authenticate(std::string_view token) const
{
    if (token.empty()) return std::nullopt;
    for (auto const & p : principals_) {
        if (p.token.size() == token.size() && CRYPTO_memcmp(p.token.data(), token.data(), token.size()) == 0) {
            return p;
        }
    }
    return std::nullopt;
}

std::optional<Principal> TokenRegistry::find_user(std::string_view user_id) const
{
    for (auto const & p : principals_) {
        if (p.user_id == user_id) return p;
    }
    return std::nullopt;
}

Principal TokenRegistry::provision(std::string const & user_id, Role role)
{
    if (auto existing = find_user(user_id)) return *existing;
    if (user_id.empty()) throw ConfigError("user id must not be empty");
    principals_.push_back({user_id, role, random_token()});
    return principals_.back();
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::filesystem::path resolve(std::filesystem::path const & base, std::filesystem::path p)
{
    return p.is_absolute() ? p : base / p;
}

BackendConfig parse_backend(json const & j, std::filesystem::path const & base)
{
    BackendConfig c;
    c.kind = j.value("kind", c.kind);
    if (c.kind != "mock" && c.kind != "remote") {
        throw ConfigError(fmt::format("backend kind must be \"mock\" or \"remote\", got \"{}\"", c.kind));
    }
    if (j.contains("rules")) c.rules = resolve(base, j.at("rules").get<std::string>());
    c.base_url = j.value("base_url", c.base_url);
    c.path = j.value("path", c.path);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.retries = j.value("retries", c.retries);
    if (c.timeout_seconds < 1) throw ConfigError("backend timeout_seconds must be >= 1");
    if (c.retries < 0) throw ConfigError("backend retries must be >= 0");
    return c;
}

} // namespace

ServiceConfig parse_service_config(json const & j, std::filesystem::path const & base_dir)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ServiceConfig c;
    try {
        if (j.contains("listen")) {
            auto const & l = j.at("listen");
            c.host = l.value("host", c.host);
            c.port = l.value("port", c.port);
        }
        if (c.port < 0 || c.port > 65535) throw ConfigError(fmt::format("bad port {}", c.port));
        c.data_dir = resolve(base_dir, j.value("data_dir", c.data_dir.string()));
        c.tokens_file = resolve(base_dir, j.value("tokens_file", c.tokens_file.string()));
        if (j.contains("exercises_dir") && !j.at("exercises_dir").is_null()) {
            c.exercises_dir = resolve(base_dir, j.at("exercises_dir").get<std::string>());
        }
        if (j.contains("class")) c.initial_class = class_context_from_json(j.at("class"));
        if (j.contains("chat")) c.chat = parse_backend(j.at("chat"), base_dir);
        if (j.contains("rewrite")) c.rewrite = parse_backend(j.at("rewrite"), base_dir);
        if (j.contains("rewrite_params")) {
            auto const & p = j.at("rewrite_params");
            c.rewrite_params.model = p.value("model", c.rewrite_params.model);
            c.rewrite_params.temperature = p.value("temperature", c.rewrite_params.temperature);
            c.rewrite_params.max_tokens = p.value("max_tokens", c.rewrite_params.max_tokens);
            validate_params(c.rewrite_params);
        }
        c.max_field_bytes = j.value("max_field_bytes", c.max_field_bytes);
    } catch (json::exception const & e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    } catch (std::invalid_argument const & e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }
    return c;
}

ServiceConfig load_service_config(std::filesystem::path const & path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (json::parse_error const & e) {
        throw ConfigError(fmt::format("config file {}: {}", path.string(), e.what()));
    }
    return parse_service_config(j, path.parent_path().empty() ? "." : path.parent_path());
}

std::optional<std::string> process_env(std::string const & name)
{
    char const * v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

std::shared_ptr<CompletionBackend> make_backend(BackendConfig const & config, EnvLookup const & env)
{
    if (config.kind == "mock") {
        if (config.rules.empty()) return std::make_shared<MockBackend>(std::vector<MockRule>{});
        try {
            return MockBackend::load(config.rules);
        } catch (std::exception const & e) {
            throw ConfigError(fmt::format("mock rules {}: {}", config.rules.string(), e.what()));
        }
    }
    auto key = env(config.api_key_env);
    if (!key) {
        throw ConfigError(fmt::format("remote backend needs the environment variable {}", config.api_key_env));
    }
    RemoteBackendConfig rc;
    rc.base_url = config.base_url;
    rc.path = config.path;
    rc.api_key = *key;
    rc.timeout = std::chrono::seconds{config.timeout_seconds};
    rc.retries = config.retries;
    return std::make_shared<RemoteBackend>(rc);
}

Backends make_backends(ServiceConfig const & config, EnvLookup const & env)
{
    Backends b;
    b.chat = make_backend(config.chat, env);
    b.rewrite = config.rewrite ? make_backend(*config.rewrite, env) : b.chat;
    b.rewrite_params = config.rewrite_params;
    return b;
}

// ---------------------------------------------------------------------------
// Service

namespace {

struct HttpError
{
    int status;
    std::string code;
    std::string message;
};

void send_json(httplib::Response & res, int status, ordered_json const & body)
{
    res.status = status;
    res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

void send_error(httplib::Response & res, HttpError const & e)
{
    send_json(res, e.status, {{"code", e.code}, {"message", e.message}});
}

json parse_body(httplib::Request const & req)
{
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw HttpError{400, "bad_request", "body must be a JSON object"};
        return j;
    } catch (json::parse_error const & e) {
        throw HttpError{400, "bad_request", fmt::format("body is not valid JSON: {}", e.what())};
    }
}

std::string string_field(json const & body, char const * name, bool required = false)
{
    if (!body.contains(name) || body.at(name).is_null()) {
        if (required) throw HttpError{400, "bad_request", fmt::format("missing field \"{}\"", name)};
        return {};
    }
    if (!body.at(name).is_string()) {
        throw HttpError{400, "bad_request", fmt::format("field \"{}\" must be a string", name)};
    }
    return body.at(name).get<std::string>();
}

std::size_t positive_param(httplib::Request const & req, char const * name, std::size_t fallback,
                           std::size_t max)
{
    if (!req.has_param(name)) return fallback;
    auto const text = req.get_param_value(name);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || v < 1 || v > max) {
        throw HttpError{400, "bad_request", fmt::format("{} must be an integer in [1, {}]", name, max)};
    }
    return v;
}

double number_param(httplib::Request const & req, char const * name, double fallback)
{
    if (!req.has_param(name)) return fallback;
    auto const text = req.get_param_value(name);
    try {
        std::size_t used = 0;
        double const v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (std::exception const &) {
        throw HttpError{400, "bad_request", fmt::format("{} must be a number", name)};
    }
}

ordered_json record_json(QueryLogRecord const & r)
{
    return ordered_json::parse(encode_record(r));
}

} // namespace

struct Service::Impl
{
    ServiceConfig config;
    Backends backends;
    TokenRegistry tokens;
    std::unique_ptr<LogStore> log;
    std::unique_ptr<LabelStore> labels;
    std::vector<ExerciseText> exercises;

    mutable std::shared_mutex class_mutex;
    ClassContext cls;

    std::mutex perf_mutex;
    std::optional<std::vector<PerformanceRecord>> performance;

    std::mutex id_mutex;
    std::uint64_t next_id = 1;

    httplib::Server server;
    std::atomic<bool> bound{false};

    std::filesystem::path data(char const * name) const { return config.data_dir / name; }

    Principal authenticate(httplib::Request const & req) const
    {
        auto const header = req.get_header_value("Authorization");
        constexpr std::string_view prefix = "Bearer ";
        if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) {
            throw HttpError{401, "unauthorized", "missing bearer token"};
        }
        auto p = tokens.authenticate(std::string_view(header).substr(prefix.size()));
        if (!p) throw HttpError{401, "unauthorized", "unknown bearer token"};
        return *p;
    }

    Principal instructor(httplib::Request const & req) const
    {
        auto p = authenticate(req);
        if (p.role != Role::instructor) {
            throw HttpError{403, "forbidden", "instructor role required"};
        }
        return p;
    }

    std::string allocate_id()
    {
        std::lock_guard lock(id_mutex);
        for (;;) {
            auto id = fmt::format("q{:06d}", next_id++);
            if (!log->find(id)) return id;
        }
    }

    void post_query(httplib::Request const & req, httplib::Response & res)
    {
        auto const who = authenticate(req);
        auto const body = parse_body(req);
        RawRequest raw;
        raw.user_id = who.user_id;
        raw.language = string_field(body, "language");
        raw.code = string_field(body, "code");
        raw.error = string_field(body, "error");
        raw.issue = string_field(body, "issue");

        RequestEnvironment env;
        env.next_id = [this] { return allocate_id(); };
        env.now = system_now;
        env.max_field_bytes = config.max_field_bytes;
        HelpRequest request;
        try {
            request = validate_request(raw, env);
        } catch (ValidationError const & e) {
            int const status = e.kind() == ValidationError::Kind::oversized_field ? 413 : 400;
            throw HttpError{status, status == 413 ? "payload_too_large" : "bad_request", e.what()};
        }

        QueryLogRecord record;
        record.request = request;
        try {
            record.response = respond(request, class_context(), backends);
        } catch (BackendError const & e) {
            record.status = std::string(status_backend_failure);
            record.failure = fmt::format("{}: {}", to_string(e.kind()), e.what());
            record.response.request_id = request.id;
            record.response.template_version = std::string(prompts::template_version);
            log->append(record);
            send_json(res, 502, {{"code", "backend_failure"},
                                 {"message", *record.failure},
                                 {"query_id", request.id}});
            return;
        }
        log->append(record);
        ordered_json out = {{"query_id", request.id}, {"main_text", record.response.main_text}};
        if (record.response.clarification_text) {
            out["clarification_text"] = *record.response.clarification_text;
        }
        send_json(res, 200, out);
    }

    void get_queries(httplib::Request const & req, httplib::Response & res)
    {
        auto const who = authenticate(req);
        std::optional<std::string> user;
        if (req.has_param("user")) user = req.get_param_value("user");
        if (who.role == Role::student) {
            if (user && *user != who.user_id) {
                throw HttpError{403, "forbidden", "students may only read their own queries"};
            }
            user = who.user_id;
        }
        std::size_t const page = positive_param(req, "page", 1, 1'000'000);
        std::size_t const page_size = positive_param(req, "page_size", 50, 500);

        std::vector<QueryLogRecord> matching;
        for (auto & r : log->load_all()) {
            if (!user || r.request.user_id == *user) matching.push_back(std::move(r));
        }
        ordered_json records = ordered_json::array();
        std::size_t const first = (page - 1) * page_size;
        for (std::size_t i = first; i < matching.size() && i < first + page_size; ++i) {
            records.push_back(record_json(matching[i]));
        }
        ordered_json out;
        out["user"] = user ? ordered_json(*user) : ordered_json(nullptr);
        out["page"] = page;
        out["page_size"] = page_size;
        out["total"] = matching.size();
        out["records"] = std::move(records);
        send_json(res, 200, out);
    }

    void post_label(httplib::Request const & req, httplib::Response & res)
    {
        auto const who = instructor(req);
        auto const body = parse_body(req);
        auto const query_id = string_field(body, "query_id", true);
        auto rater_id = string_field(body, "rater_id");
        if (rater_id.empty()) rater_id = who.user_id;
        auto const category_text = string_field(body, "category", true);
        auto const category = parse_category(category_text);
        if (!category) {
            throw HttpError{400, "unknown_category",
                            fmt::format("unknown category '{}'; valid categories: {}",
                                        category_text, category_names())};
        }
        if (!log->find(query_id)) {
            throw HttpError{404, "unknown_query", fmt::format("no query with id '{}'", query_id)};
        }
        bool const replaced = labels->upsert({query_id, rater_id, *category});
        send_json(res, 200, {{"query_id", query_id},
                             {"rater_id", rater_id},
                             {"category", category_name(*category)},
                             {"replaced", replaced}});
    }

    void get_report(httplib::Request const & req, httplib::Response & res)
    {
        instructor(req);
        analytics::AnalysisOptions options;
        options.dedup.k = number_param(req, "dedup_k", options.dedup.k);
        double const gap = number_param(req, "gap_seconds", static_cast<double>(options.gap_seconds));
        if (gap != std::floor(gap) || gap < 1) {
            throw HttpError{400, "bad_request", "gap_seconds must be a positive integer"};
        }
        options.gap_seconds = static_cast<std::int64_t>(gap);
        for (char const * key : {"exclude", "exclusions"}) {
            for (std::size_t i = 0; i < req.get_param_value_count(key); ++i) {
                std::stringstream ss(req.get_param_value(key, i));
                std::string user;
                while (std::getline(ss, user, ',')) {
                    if (!user.empty()) options.exclusions.users.insert(user);
                }
            }
        }
        if (req.has_param("auto_exclude_outliers")) {
            auto const v = req.get_param_value("auto_exclude_outliers");
            options.exclusions.auto_extreme_queries = v == "1" || v == "true";
        }
        try {
            analytics::validate(options.dedup);
        } catch (std::invalid_argument const & e) {
            throw HttpError{400, "bad_request", e.what()};
        }

        analytics::AnalysisInputs inputs;
        for (auto const & r : log->load_all()) inputs.log.push_back(r.request);
        inputs.labels = labels->current();
        if (config.exercises_dir) inputs.exercises = exercises;
        {
            std::lock_guard lock(perf_mutex);
            inputs.performance = performance;
        }
        try {
            auto const report = analytics::analyze(inputs, options);
            send_json(res, 200, analytics::to_json(report));
        } catch (analytics::AnalyticsError const & e) {
            throw HttpError{409, "analytics_error", e.what()};
        }
    }

    void check_class(httplib::Request const & req) const
    {
        auto const id = req.path_params.at("id");
        std::shared_lock lock(class_mutex);
        if (id != cls.class_id) {
            throw HttpError{404, "unknown_class", fmt::format("no class with id '{}'", id)};
        }
    }

    void get_class(httplib::Request const & req, httplib::Response & res)
    {
        authenticate(req);
        check_class(req);
        send_json(res, 200, to_json(class_context()));
    }

    void post_class(httplib::Request const & req, httplib::Response & res)
    {
        instructor(req);
        check_class(req);
        auto const body = parse_body(req);
        std::unique_lock lock(class_mutex);
        json merged = json::parse(to_json(cls).dump());
        for (char const * key : {"name", "avoid_set"}) {
            if (body.contains(key)) merged[key] = body.at(key);
        }
        if (body.contains("backend_params")) {
            if (!body.at("backend_params").is_object()) {
                throw HttpError{400, "bad_request", "backend_params must be an object"};
            }
            for (auto const & [k, v] : body.at("backend_params").items()) merged["backend_params"][k] = v;
        }
        merged["class_id"] = cls.class_id;
        ClassContext next;
        try {
            next = class_context_from_json(merged);
        } catch (json::exception const & e) {
            throw HttpError{400, "bad_request", e.what()};
        } catch (std::invalid_argument const & e) {
            throw HttpError{400, "bad_request", e.what()};
        }
        write_class_context(data("class.json"), next);
        cls = next;
        send_json(res, 200, to_json(cls));
    }

    void post_performance(httplib::Request const & req, httplib::Response & res)
    {
        instructor(req);
        std::istringstream in(req.body);
        std::vector<PerformanceRecord> records;
        try {
            records = import_performance(in);
        } catch (PerformanceError const & e) {
            throw HttpError{400, "bad_performance", e.what()};
        }
        std::ostringstream out;
        write_performance(out, records);
        std::lock_guard lock(perf_mutex);
        write_file_atomic(data("performance.csv"), out.str());
        std::size_t const n = records.size();
        performance = std::move(records);
        send_json(res, 200, {{"records", n}});
    }

    void get_export(httplib::Request const & req, httplib::Response & res)
    {
        instructor(req);
        std::ostringstream out;
        log->export_log(out);
        res.status = 200;
        res.set_content(out.str(), "application/x-ndjson");
    }

    void post_import(httplib::Request const & req, httplib::Response & res)
    {
        instructor(req);
        std::istringstream in(req.body);
        try {
            auto const n = log->import_log(in);
            send_json(res, 200, {{"imported", n}});
        } catch (ImportError const & e) {
            send_json(res, 400, {{"code", "bad_import"}, {"message", e.what()}, {"line", e.line()}});
        }
    }

    ClassContext class_context() const
    {
        std::shared_lock lock(class_mutex);
        return cls;
    }
};

Service::Service(ServiceConfig config, Backends backends, TokenRegistry tokens)
: impl_(std::make_unique<Impl>())
{
    auto & m = *impl_;
    m.config = std::move(config);
    m.backends = std::move(backends);
    m.tokens = std::move(tokens);
    if (!m.backends.chat || !m.backends.rewrite) {
        throw ConfigError("service needs chat and rewrite backends");
    }
    std::filesystem::create_directories(m.config.data_dir);
    m.log = std::make_unique<LogStore>(m.data("queries.jsonl"));
    if (m.log->recovered_bytes() > 0) {
        std::cerr << fmt::format("recovered query log: dropped {} bytes of a torn final line\n",
                                 m.log->recovered_bytes());
    }
    m.labels = std::make_unique<LabelStore>(m.data("labels.jsonl"));
    m.cls = std::filesystem::exists(m.data("class.json")) ? read_class_context(m.data("class.json"))
                                                         : normalized(m.config.initial_class);
    if (std::filesystem::exists(m.data("performance.csv"))) {
        m.performance = import_performance(m.data("performance.csv"));
    }
    if (m.config.exercises_dir) {
        auto imported = import_exercises(*m.config.exercises_dir);
        for (auto const & [path, why] : imported.failures) {
            std::cerr << fmt::format("skipping exercise {}: {}\n", path.string(), why);
        }
        m.exercises = std::move(imported.exercises);
    }
    m.next_id = m.log->size() + 1;
    mount(m.server);
}

Service::~Service()
{
    stop();
}

void Service::mount(httplib::Server & server)
{
    Impl * m = impl_.get();
    auto wrap = [m](void (Impl::*handler)(httplib::Request const &, httplib::Response &)) {
        return [m, handler](httplib::Request const & req, httplib::Response & res) {
            try {
                (m->*handler)(req, res);
            } catch (HttpError const & e) {
                send_error(res, e);
            } catch (StorageError const & e) {
                send_error(res, {500, "storage_error", e.what()});
            } catch (std::exception const & e) {
                send_error(res, {500, "internal_error", e.what()});
            }
        };
    };
    server.Get("/api/health", [m](httplib::Request const &, httplib::Response & res) {
        send_json(res, 200, {{"status", "ok"}, {"queries", m->log->size()}});
    });
    server.Post("/api/queries", wrap(&Impl::post_query));
    server.Get("/api/queries", wrap(&Impl::get_queries));
    server.Post("/api/labels", wrap(&Impl::post_label));
    server.Get("/api/analytics/report", wrap(&Impl::get_report));
    server.Get("/api/classes/:id/config", wrap(&Impl::get_class));
    server.Post("/api/classes/:id/config", wrap(&Impl::post_class));
    server.Post("/api/performance", wrap(&Impl::post_performance));
    server.Get("/api/export", wrap(&Impl::get_export));
    server.Post("/api/import", wrap(&Impl::post_import));
    server.set_error_handler([](httplib::Request const &, httplib::Response & res) {
        if (res.body.empty()) {
            send_error(res, {res.status, res.status == 404 ? "not_found" : "error",
                             fmt::format("HTTP {}", res.status)});
        }
    });
}

bool Service::listen()
{
    return impl_->server.listen(impl_->config.host, impl_->config.port);
}

int Service::bind_any_port()
{
    int const port = impl_->server.bind_to_any_port(impl_->config.host);
    impl_->bound = port > 0;
    return port;
}

bool Service::run()
{
    return impl_->server.listen_after_bind();
}

void Service::stop()
{
    if (impl_) impl_->server.stop();
}

bool Service::running() const
{
    return impl_->server.is_running();
}

LogStore & Service::log()
{
    return *impl_->log;
}

ClassContext Service::class_context() const
{
    return impl_->class_context();
}

} // namespace tutorguard::service
