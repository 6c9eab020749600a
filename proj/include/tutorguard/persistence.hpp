// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/labels.hpp"
#include "tutorguard/query_model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tutorguard {

inline constexpr int log_schema_version = 1;

/**
 * One line of the query log: the request and its response, flattened.
 *
 * Key order on the wire (fixed):
 *   schema_version, seq, id, user_id, timestamp, language, code, error,
 *   issue, status, failure, main_text, clarification_text,
 *   code_was_removed, fallback_strip_applied, template_version, trace
 * where trace is a list of {stage, prompt, completion, note}. `failure`,
 * `clarification_text` and `note` are null when absent. `status` is "ok" or
 * "backend_failure".
 */
struct QueryLogRecord
{
    int schema_version = log_schema_version;
    std::uint64_t seq = 0;
    HelpRequest request;
    std::string status = "ok";
    std::optional<std::string> failure;
    AssistanceResponse response;

    bool failed() const { return status != "ok"; }

    friend bool operator==(QueryLogRecord const &, QueryLogRecord const &) = default;
};

inline constexpr std::string_view status_ok = "ok";
inline constexpr std::string_view status_backend_failure = "backend_failure";

/// Single-line JSON, no trailing newline.
std::string encode_record(QueryLogRecord const & record);
/// Throws std::invalid_argument describing the defect.
QueryLogRecord decode_record(std::string_view line);

class StorageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ImportError : public std::runtime_error
{
public:
    ImportError(std::size_t line, std::string const & message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/**
 * Append-only JSONL query log.
 *
 * Each append is flushed and fsync'd before returning. Opening a log whose
 * final line was cut short by a crash truncates that partial line; any
 * other unparseable line is a StorageError. Appends are serialized; reads
 * may run alongside them and see a consistent prefix.
 */
class LogStore
{
public:
    explicit LogStore(std::filesystem::path path);
    ~LogStore();

    LogStore(LogStore const &) = delete;
    LogStore & operator=(LogStore const &) = delete;

    /// Assigns the next sequence number and returns it.
    std::uint64_t append(QueryLogRecord record);

    std::vector<QueryLogRecord> load_all() const;
    std::size_t size() const;
    std::optional<QueryLogRecord> find(std::string_view query_id) const;

    /// Writes every record, one per line, in append order.
    std::size_t export_log(std::ostream & out) const;
    std::size_t export_log(std::filesystem::path const & destination) const;

    /// Appends records keeping their sequence numbers, which must increase
    /// past the current tail. All lines are parsed before anything is
    /// written; a bad line throws ImportError naming it (1-based).
    std::size_t import_log(std::istream & in);
    std::size_t import_log(std::filesystem::path const & source);

    /// Bytes dropped from a torn tail when the store was opened.
    std::size_t recovered_bytes() const { return recovered_bytes_; }

    std::filesystem::path const & path() const { return path_; }

private:
    void write_line(std::string const & line);

    std::filesystem::path path_;
    int fd_ = -1;
    mutable std::shared_mutex mutex_;
    std::vector<QueryLogRecord> records_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::size_t recovered_bytes_ = 0;
};

/// Parses a whole JSONL log (no store). Throws ImportError.
std::vector<QueryLogRecord> read_log(std::istream & in);
std::vector<QueryLogRecord> read_log(std::filesystem::path const & path);

// ---------------------------------------------------------------------------
// Labels

struct StoredLabel
{
    std::uint64_t seq = 0;
    QueryLabel label;
};

/// Labels JSONL: {"query_id":..,"rater_id":..,"category":..}; a later line
/// for the same (query, rater) supersedes earlier ones.
std::string encode_label(QueryLabel const & label);
QueryLabel decode_label(std::string_view line);

/// Latest label per (query, rater), in first-seen order. Throws ImportError.
std::vector<QueryLabel> read_labels(std::istream & in);
std::vector<QueryLabel> read_labels(std::filesystem::path const & path);

/// Append-only label history; upsert keeps the superseded lines as audit.
class LabelStore
{
public:
    explicit LabelStore(std::filesystem::path path);

    /// Returns true if an earlier label for (query, rater) was replaced.
    bool upsert(QueryLabel const & label);

    std::vector<QueryLabel> current() const;
    std::vector<QueryLabel> history() const;

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::vector<QueryLabel> history_;
};

// ---------------------------------------------------------------------------
// Exercises and course performance

struct ExerciseText
{
    std::string exercise_id;
    std::string text;
};

struct ExerciseImport
{
    std::vector<ExerciseText> exercises;
    std::vector<std::pair<std::filesystem::path, std::string>> failures;
};

/// Loads every *.txt file (sorted by name); id is the filename stem.
/// Unreadable, empty or non-UTF-8 files are reported in `failures`.
/// Throws StorageError if the directory itself cannot be listed.
ExerciseImport import_exercises(std::filesystem::path const & directory);

struct PerformanceRecord
{
    std::string user_id;
    std::string activity_id;
    double points = 0.0;

    friend bool operator==(PerformanceRecord const &, PerformanceRecord const &) = default;
};

class PerformanceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// CSV with header columns user_id, activity_id, points (any order).
/// Throws PerformanceError on missing column, bad or negative points, or a
/// duplicate (user, activity) key.
std::vector<PerformanceRecord> import_performance(std::istream & in);
std::vector<PerformanceRecord> import_performance(std::filesystem::path const & path);

void write_performance(std::ostream & out, std::vector<PerformanceRecord> const & records);

/// Writes `contents` to a temporary sibling then renames over `path`.
void write_file_atomic(std::filesystem::path const & path, std::string_view contents);

ClassContext read_class_context(std::filesystem::path const & path);
void write_class_context(std::filesystem::path const & path, ClassContext const & ctx);
nlohmann::ordered_json to_json(ClassContext const & ctx);
ClassContext class_context_from_json(nlohmann::json const & j);

} // namespace tutorguard
