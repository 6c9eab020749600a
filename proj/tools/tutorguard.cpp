// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

// Operator entry point: serve, analyze, seed, tokens.

#include "tutorguard/analytics/errors.hpp"
#include "tutorguard/analytics/report.hpp"
#include "tutorguard/seed.hpp"
#include "tutorguard/service.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <pthread.h>
#include <thread>

namespace fs = std::filesystem;
using namespace tutorguard;

namespace {

constexpr int exit_analytics = 1;
constexpr int exit_input = 2;

struct AnalyzeArgs
{
    fs::path log;
    std::optional<fs::path> exercises;
    std::optional<fs::path> performance;
    std::optional<fs::path> labels;
    std::optional<fs::path> out;
    double dedup_k = 0.25;
    std::int64_t gap_seconds = analytics::default_gap_seconds;
    std::vector<std::string> exclude;
    bool auto_exclude = false;
    std::string transform = "log1p";
    std::optional<std::string> primary_rater;
};

int run_analyze(AnalyzeArgs const & a)
{
    analytics::AnalysisInputs inputs;
    analytics::AnalysisOptions options;
    try {
        for (auto const & r : read_log(a.log)) inputs.log.push_back(r.request);
        if (a.labels) inputs.labels = read_labels(*a.labels);
        if (a.performance) inputs.performance = import_performance(*a.performance);
        if (a.exercises) {
            auto imported = import_exercises(*a.exercises);
            for (auto const & [path, why] : imported.failures) {
                std::cerr << fmt::format("warning: skipping exercise {}: {}\n", path.string(), why);
            }
            inputs.exercises = std::move(imported.exercises);
        }
        options.dedup.k = a.dedup_k;
        analytics::validate(options.dedup);
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    options.gap_seconds = a.gap_seconds;
    options.exclusions.users.insert(a.exclude.begin(), a.exclude.end());
    options.exclusions.auto_extreme_queries = a.auto_exclude;
    options.transform = a.transform == "none" ? analytics::SkewTransform::none
                                              : analytics::SkewTransform::log1p;
    options.categories.primary_rater = a.primary_rater;

    analytics::AnalysisReport report;
    try {
        report = analytics::analyze(inputs, options);
    } catch (analytics::AnalyticsError const & e) {
        std::cerr << "analytics error: " << e.what() << "\n";
        return exit_analytics;
    }

    auto const text = analytics::to_text(report);
    std::cout << text;
    if (a.out) {
        try {
            fs::create_directories(*a.out);
            write_file_atomic(*a.out / "report.json", analytics::to_json(report).dump(2) + "\n");
            write_file_atomic(*a.out / "report.txt", text);
        } catch (std::exception const & e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_input;
        }
    }
    return 0;
}

int run_seed(fs::path const & out, seed::SeedOptions const & options)
{
    try {
        auto const corpus = seed::generate(options);
        seed::write(corpus, out);
        auto const & m = corpus.manifest;
        std::cout << fmt::format("wrote {} queries from {} users to {} ({} planted duplicates)\n",
                                 m["queries"].get<std::size_t>(), m["users"].get<std::size_t>(),
                                 out.string(), m["duplicates"].get<std::size_t>());
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return 0;
}

struct TokenArgs
{
    fs::path file;
    std::vector<std::string> students;
    std::vector<std::string> instructors;
    std::optional<fs::path> students_from_log;
};

int run_tokens(TokenArgs const & a)
{
    try {
        service::TokenRegistry registry;
        if (fs::exists(a.file)) registry = service::TokenRegistry::load(a.file);
        std::vector<std::string> students = a.students;
        if (a.students_from_log) {
            std::set<std::string> seen;
            for (auto const & r : read_log(*a.students_from_log)) {
                if (seen.insert(r.request.user_id).second) students.push_back(r.request.user_id);
            }
        }
        for (auto const & u : a.instructors) registry.provision(u, service::Role::instructor);
        for (auto const & u : students) registry.provision(u, service::Role::student);
        registry.save(a.file);
        for (auto const & p : registry.principals()) {
            std::cout << fmt::format("{:<10} {:<16} {}\n", service::role_name(p.role), p.user_id, p.token);
        }
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return 0;
}

int run_serve(fs::path const & config_path)
{
    // Block the stop signals before any thread starts so only the waiter
    // below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    std::unique_ptr<service::Service> svc;
    service::ServiceConfig config;
    try {
        config = service::load_service_config(config_path);
        auto tokens = service::TokenRegistry::load(config.tokens_file);
        auto backends = service::make_backends(config);
        svc = std::make_unique<service::Service>(config, std::move(backends), std::move(tokens));
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        svc->stop();
    });
    std::cerr << fmt::format("listening on {}:{}\n", config.host, config.port);
    bool const ok = svc->listen();
    if (!ok) {
        std::cerr << fmt::format("error: cannot listen on {}:{}\n", config.host, config.port);
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    waiter.join();
    return ok ? 0 : exit_input;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Help-request assistant service and query-log analytics"};
    app.require_subcommand(1);

    fs::path config_path;
    auto * serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--config,config", config_path, "Service config JSON")->required();

    AnalyzeArgs analyze;
    auto * an = app.add_subcommand("analyze", "Run the analytics pipeline on an exported log");
    an->add_option("log", analyze.log, "Query log (JSONL)")->required();
    an->add_option("--exercises", analyze.exercises, "Directory of exercise .txt files");
    an->add_option("--performance", analyze.performance, "Course performance CSV");
    an->add_option("--labels", analyze.labels, "Category labels (JSONL)");
    an->add_option("--out", analyze.out, "Directory for report.json and report.txt");
    an->add_option("--dedup-k", analyze.dedup_k, "Near-duplicate threshold")->capture_default_str();
    an->add_option("--gap-seconds", analyze.gap_seconds, "Session inactivity gap")
        ->capture_default_str()->check(CLI::PositiveNumber);
    an->add_option("--exclude-user", analyze.exclude, "Exclude a user from the composite and correlation");
    an->add_flag("--auto-exclude-outliers", analyze.auto_exclude,
                 "Also exclude users above mean + 3 SD total queries");
    an->add_option("--transform", analyze.transform, "Skew transform")
        ->check(CLI::IsMember({"log1p", "none"}))->capture_default_str();
    an->add_option("--primary-rater", analyze.primary_rater, "Rater whose label wins on disagreement");

    fs::path seed_out;
    seed::SeedOptions seed_options;
    auto * sd = app.add_subcommand("seed", "Generate a synthetic corpus with a ground-truth manifest");
    sd->add_option("out", seed_out, "Output directory")->required();
    sd->add_option("--users", seed_options.users)->capture_default_str()->check(CLI::Range(3, 100000));
    sd->add_option("--queries", seed_options.queries)->capture_default_str();
    sd->add_option("--profile", seed_options.profile)->capture_default_str();
    sd->add_option("--seed", seed_options.seed)->capture_default_str();

    TokenArgs tokens;
    auto * tk = app.add_subcommand("tokens", "Provision bearer tokens");
    tk->add_option("--file", tokens.file, "Tokens JSON (created or extended)")->required();
    tk->add_option("--student", tokens.students);
    tk->add_option("--instructor", tokens.instructors);
    tk->add_option("--students-from-log", tokens.students_from_log, "Add every user in a query log");

    CLI11_PARSE(app, argc, argv);

    if (*serve) return run_serve(config_path);
    if (*an) return run_analyze(analyze);
    if (*sd) return run_seed(seed_out, seed_options);
    return run_tokens(tokens);
}
