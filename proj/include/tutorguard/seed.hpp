// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/labels.hpp"
#include "tutorguard/persistence.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tutorguard::seed {

/// Reference proportions of the "table1" profile.
struct ReferenceProfile
{
    static constexpr std::size_t users = 49;
    static constexpr std::size_t queries = 2591;
    static constexpr std::size_t duplicates = 509;
    static constexpr std::size_t off_topic = 3;
    static constexpr std::size_t debugging = 833;
    static constexpr std::size_t implementation = 1038;
    static constexpr std::size_t understanding = 161;
    static constexpr std::size_t nothing = 47;
    static constexpr std::size_t debugging_error_only = 484;
    static constexpr std::size_t debugging_outcome_only = 90;
    static constexpr std::size_t debugging_error_and_outcome = 259;
    static constexpr std::size_t outlier_queries = 614;
    static constexpr double cronbach_alpha = 0.87;
    static constexpr double correlation_r = 0.38;
};

struct SeedOptions
{
    std::size_t users = ReferenceProfile::users;
    std::size_t queries = ReferenceProfile::queries;
    std::string profile = "table1";
    std::uint64_t seed = 20230206;
};

/// Everything a generated corpus contains. `manifest` records every planted
/// quantity for comparison against a later analysis.
struct Corpus
{
    std::vector<QueryLogRecord> log;
    std::vector<ExerciseText> exercises;
    std::vector<QueryLabel> labels;
    std::vector<PerformanceRecord> performance;
    nlohmann::ordered_json manifest;
};

/**
 * Builds a deterministic synthetic corpus. Counts scale from the table1
 * profile to the requested size; an extreme-usage outlier is planted when
 * there are at least 6 users. Throws std::invalid_argument for an unknown
 * profile, fewer than 3 users, or fewer than 4 queries per user.
 */
Corpus generate(SeedOptions const & options);

/// Layout: log.jsonl, labels.jsonl, performance.csv, exercises/<id>.txt,
/// manifest.json.
void write(Corpus const & corpus, std::filesystem::path const & out_dir);

} // namespace tutorguard::seed
