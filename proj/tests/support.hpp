// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/query_model.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

namespace tutorguard::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path()
            / ("tutorguard-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    TempDir(TempDir const &) = delete;
    TempDir & operator=(TempDir const &) = delete;

    std::filesystem::path const & path() const { return path_; }
    std::filesystem::path operator/(std::string const & name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline Timestamp at(std::int64_t seconds)
{
    return Timestamp{std::chrono::seconds{1'675'670'400 + seconds}};   // 2023-02-06T08:00:00Z
}

inline HelpRequest query(std::string id, std::string user, std::int64_t seconds,
                         std::string code = "", std::string error = "", std::string issue = "")
{
    HelpRequest r;
    r.id = std::move(id);
    r.user_id = std::move(user);
    r.timestamp = at(seconds);
    r.language = "Python";
    r.code = std::move(code);
    r.error = std::move(error);
    r.issue = std::move(issue);
    return r;
}

inline std::string random_string(std::mt19937_64 & rng, std::size_t max_len, std::string_view alphabet)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s(len(rng), ' ');
    for (auto & c : s) c = alphabet[pick(rng)];
    return s;
}

} // namespace tutorguard::testing
