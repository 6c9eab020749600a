// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/persistence.hpp"

#include "tutorguard/utf8.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

namespace tutorguard {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json optional_string(std::optional<std::string> const & s)
{
    return s ? ordered_json(*s) : ordered_json(nullptr);
}

std::optional<std::string> read_optional_string(nlohmann::json const & j, char const * key)
{
    auto const & v = j.at(key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<std::string>();
}

std::string read_file(std::filesystem::path const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StorageError(fmt::format("cannot read '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dump_line(ordered_json const & j)
{
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

} // namespace

// ---------------------------------------------------------------------------
// Record codec

std::string encode_record(QueryLogRecord const & r)
{
    ordered_json j;
    j["schema_version"] = r.schema_version;
    j["seq"] = r.seq;
    auto const request = to_json(r.request);
    for (auto const & [k, v] : request.items()) {
        j[k] = v;
    }
    j["status"] = r.status;
    j["failure"] = optional_string(r.failure);
    j["main_text"] = r.response.main_text;
    j["clarification_text"] = optional_string(r.response.clarification_text);
    j["code_was_removed"] = r.response.code_was_removed;
    j["fallback_strip_applied"] = r.response.fallback_strip_applied;
    j["template_version"] = r.response.template_version;
    auto trace = ordered_json::array();
    for (auto const & t : r.response.trace) {
        ordered_json e;
        e["stage"] = t.stage;
        e["prompt"] = t.prompt;
        e["completion"] = t.completion;
        e["note"] = optional_string(t.note);
        trace.push_back(std::move(e));
    }
    j["trace"] = std::move(trace);
    return dump_line(j);
}

QueryLogRecord decode_record(std::string_view line)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (nlohmann::json::parse_error const & e) {
        throw std::invalid_argument(fmt::format("invalid JSON: {}", e.what()));
    }
    if (!j.is_object()) {
        throw std::invalid_argument("record is not a JSON object");
    }
    try {
        QueryLogRecord r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != log_schema_version) {
            throw std::invalid_argument(
                fmt::format("unsupported schema_version {}", r.schema_version));
        }
        r.seq = j.at("seq").get<std::uint64_t>();
        r.request = help_request_from_json(j);
        r.status = j.at("status").get<std::string>();
        if (r.status != status_ok && r.status != status_backend_failure) {
            throw std::invalid_argument(fmt::format("unknown status '{}'", r.status));
        }
        r.failure = read_optional_string(j, "failure");
        r.response.request_id = r.request.id;
        r.response.main_text = j.at("main_text").get<std::string>();
        r.response.clarification_text = read_optional_string(j, "clarification_text");
        r.response.code_was_removed = j.at("code_was_removed").get<bool>();
        r.response.fallback_strip_applied = j.at("fallback_strip_applied").get<bool>();
        r.response.template_version = j.at("template_version").get<std::string>();
        for (auto const & e : j.at("trace")) {
            r.response.trace.push_back(TraceEntry{
                e.at("stage").get<std::string>(),
                e.at("prompt").get<std::string>(),
                e.at("completion").get<std::string>(),
                read_optional_string(e, "note"),
            });
        }
        return r;
    } catch (nlohmann::json::exception const & e) {
        throw std::invalid_argument(fmt::format("bad record field: {}", e.what()));
    } catch (ValidationError const & e) {
        throw std::invalid_argument(e.what());
    }
}

ImportError::ImportError(std::size_t line, std::string const & message)
: std::runtime_error(fmt::format("line {}: {}", line, message))
, line_(line)
{}

namespace {

// Splits into lines; the bool says whether the final line was newline
// terminated.
std::pair<std::vector<std::string_view>, bool> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto const nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            return {lines, false};
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return {lines, true};
}

std::vector<QueryLogRecord> parse_log_text(std::string_view text)
{
    std::vector<QueryLogRecord> out;
    auto const [lines, terminated] = split_lines(text);
    (void)terminated;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(decode_record(lines[i]));
        } catch (std::invalid_argument const & e) {
            throw ImportError(i + 1, e.what());
        }
        if (out.size() > 1 && out.back().seq <= out[out.size() - 2].seq) {
            throw ImportError(i + 1, "sequence numbers must be strictly increasing");
        }
    }
    return out;
}

} // namespace

std::vector<QueryLogRecord> read_log(std::istream & in)
{
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_log_text(ss.str());
}

std::vector<QueryLogRecord> read_log(std::filesystem::path const & path)
{
    return parse_log_text(read_file(path));
}

// ---------------------------------------------------------------------------
// LogStore

LogStore::LogStore(std::filesystem::path path)
: path_(std::move(path))
{
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) {
        throw StorageError(fmt::format("cannot open log '{}': {}", path_.string(),
                                       std::strerror(errno)));
    }

    std::string const text = read_file(path_);
    auto const [lines, terminated] = split_lines(text);
    std::size_t keep_bytes = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        bool const last = i + 1 == lines.size();
        try {
            records_.push_back(decode_record(lines[i]));
        } catch (std::invalid_argument const & e) {
            if (last && !terminated) {
                // Torn write from a crash: drop the partial tail.
                recovered_bytes_ = text.size() - keep_bytes;
                if (::ftruncate(fd_, static_cast<off_t>(keep_bytes)) != 0) {
                    throw StorageError(fmt::format("cannot truncate torn tail of '{}'",
                                                   path_.string()));
                }
                ::fsync(fd_);
                break;
            }
            throw StorageError(fmt::format("{}:{}: corrupt record: {}", path_.string(),
                                           i + 1, e.what()));
        }
        if (records_.size() > 1 && records_.back().seq <= records_[records_.size() - 2].seq) {
            throw StorageError(fmt::format("{}:{}: sequence numbers not increasing",
                                           path_.string(), i + 1));
        }
        by_id_.emplace(records_.back().request.id, records_.size() - 1);
        keep_bytes += lines[i].size() + 1;
        if (last && !terminated) {
            // Complete record missing only its newline.
            write_line("");
        }
    }
}

LogStore::~LogStore()
{
    if (fd_ >= 0) {
        ::fsync(fd_);
        ::close(fd_);
    }
}

void LogStore::write_line(std::string const & line)
{
    std::string const data = line + '\n';
    std::size_t done = 0;
    while (done < data.size()) {
        auto const n = ::write(fd_, data.data() + done, data.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw StorageError(fmt::format("write to '{}' failed: {}", path_.string(),
                                           std::strerror(errno)));
        }
        done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) {
        throw StorageError(fmt::format("fsync of '{}' failed: {}", path_.string(),
                                       std::strerror(errno)));
    }
}

std::uint64_t LogStore::append(QueryLogRecord record)
{
    std::unique_lock lock(mutex_);
    if (by_id_.contains(record.request.id)) {
        throw StorageError(fmt::format("duplicate query id '{}'", record.request.id));
    }
    record.schema_version = log_schema_version;
    record.seq = records_.empty() ? 1 : records_.back().seq + 1;
    record.response.request_id = record.request.id;
    write_line(encode_record(record));
    by_id_.emplace(record.request.id, records_.size());
    records_.push_back(std::move(record));
    return records_.back().seq;
}

std::vector<QueryLogRecord> LogStore::load_all() const
{
    std::shared_lock lock(mutex_);
    return records_;
}

std::size_t LogStore::size() const
{
    std::shared_lock lock(mutex_);
    return records_.size();
}

std::optional<QueryLogRecord> LogStore::find(std::string_view query_id) const
{
    std::shared_lock lock(mutex_);
    auto const it = by_id_.find(query_id);
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return records_[it->second];
}

std::size_t LogStore::export_log(std::ostream & out) const
{
    auto const records = load_all();
    for (auto const & r : records) {
        out << encode_record(r) << '\n';
    }
    if (!out) {
        throw StorageError("export stream failed");
    }
    return records.size();
}

std::size_t LogStore::export_log(std::filesystem::path const & destination) const
{
    std::ostringstream ss;
    auto const n = export_log(ss);
    write_file_atomic(destination, ss.str());
    return n;
}

std::size_t LogStore::import_log(std::istream & in)
{
    auto const incoming = read_log(in);
    std::unique_lock lock(mutex_);
    std::uint64_t tail = records_.empty() ? 0 : records_.back().seq;
    std::set<std::string, std::less<>> ids;
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        if (incoming[i].seq <= tail) {
            throw ImportError(i + 1, fmt::format("seq {} does not follow the store tail {}",
                                                 incoming[i].seq, tail));
        }
        if (by_id_.contains(incoming[i].request.id)
            || !ids.insert(incoming[i].request.id).second)
        {
            throw ImportError(i + 1,
                              fmt::format("duplicate query id '{}'", incoming[i].request.id));
        }
        tail = incoming[i].seq;
    }
    if (incoming.empty()) {
        return 0;
    }
    // One write and one fsync for the whole batch.
    std::string batch;
    for (auto const & r : incoming) {
        if (!batch.empty()) batch += '\n';
        batch += encode_record(r);
    }
    write_line(batch);
    for (auto const & r : incoming) {
        by_id_.emplace(r.request.id, records_.size());
        records_.push_back(r);
    }
    return incoming.size();
}

std::size_t LogStore::import_log(std::filesystem::path const & source)
{
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw StorageError(fmt::format("cannot read '{}'", source.string()));
    }
    return import_log(in);
}

// ---------------------------------------------------------------------------
// Labels

std::string encode_label(QueryLabel const & label)
{
    ordered_json j;
    j["query_id"] = label.query_id;
    j["rater_id"] = label.rater_id;
    j["category"] = category_name(label.category);
    return dump_line(j);
}

QueryLabel decode_label(std::string_view line)
{
    try {
        auto const j = nlohmann::json::parse(line);
        QueryLabel label;
        label.query_id = j.at("query_id").get<std::string>();
        label.rater_id = j.at("rater_id").get<std::string>();
        auto const name = j.at("category").get<std::string>();
        auto const c = parse_category(name);
        if (!c) {
            throw std::invalid_argument(fmt::format(
                "unknown category '{}'; valid categories: {}", name, category_names()));
        }
        label.category = *c;
        return label;
    } catch (nlohmann::json::exception const & e) {
        throw std::invalid_argument(fmt::format("bad label: {}", e.what()));
    }
}

namespace {

std::vector<QueryLabel> latest_labels(std::vector<QueryLabel> const & history)
{
    std::vector<QueryLabel> out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (auto const & l : history) {
        auto const key = std::make_pair(l.query_id, l.rater_id);
        auto const it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            out.push_back(l);
        } else {
            out[it->second] = l;
        }
    }
    return out;
}

std::vector<QueryLabel> parse_labels_text(std::string_view text)
{
    std::vector<QueryLabel> history;
    auto const [lines, terminated] = split_lines(text);
    (void)terminated;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            history.push_back(decode_label(lines[i]));
        } catch (std::invalid_argument const & e) {
            throw ImportError(i + 1, e.what());
        }
    }
    return history;
}

} // namespace

std::vector<QueryLabel> read_labels(std::istream & in)
{
    std::ostringstream ss;
    ss << in.rdbuf();
    return latest_labels(parse_labels_text(ss.str()));
}

std::vector<QueryLabel> read_labels(std::filesystem::path const & path)
{
    return latest_labels(parse_labels_text(read_file(path)));
}

LabelStore::LabelStore(std::filesystem::path path)
: path_(std::move(path))
{
    if (std::filesystem::exists(path_)) {
        history_ = parse_labels_text(read_file(path_));
    } else if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
}

bool LabelStore::upsert(QueryLabel const & label)
{
    std::lock_guard lock(mutex_);
    bool const replaced = std::any_of(history_.begin(), history_.end(), [&](auto const & l) {
        return l.query_id == label.query_id && l.rater_id == label.rater_id;
    });
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << encode_label(label) << '\n';
    out.flush();
    if (!out) {
        throw StorageError(fmt::format("cannot append to '{}'", path_.string()));
    }
    history_.push_back(label);
    return replaced;
}

std::vector<QueryLabel> LabelStore::current() const
{
    std::lock_guard lock(mutex_);
    return latest_labels(history_);
}

std::vector<QueryLabel> LabelStore::history() const
{
    std::lock_guard lock(mutex_);
    return history_;
}

// ---------------------------------------------------------------------------
// Exercises

ExerciseImport import_exercises(std::filesystem::path const & directory)
{
    std::error_code ec;
    std::vector<std::filesystem::path> files;
    for (auto const & entry : std::filesystem::directory_iterator(directory, ec)) {
        if (entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        throw StorageError(fmt::format("cannot list exercises directory '{}': {}",
                                       directory.string(), ec.message()));
    }
    std::sort(files.begin(), files.end());

    ExerciseImport result;
    for (auto const & file : files) {
        std::string text;
        try {
            text = read_file(file);
        } catch (StorageError const & e) {
            result.failures.emplace_back(file, e.what());
            continue;
        }
        if (!utf8::is_valid(text)) {
            result.failures.emplace_back(file, "not valid UTF-8");
            continue;
        }
        text = normalize_trailing_newlines(std::move(text));
        if (text.empty()) {
            result.failures.emplace_back(file, "empty exercise text");
            continue;
        }
        result.exercises.push_back({file.stem().string(), std::move(text)});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Performance CSV

namespace {

std::vector<std::string> split_csv(std::string_view line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char const c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    for (auto & f : fields) {
        while (!f.empty() && (f.back() == ' ' || f.back() == '\r')) f.pop_back();
        auto const b = f.find_first_not_of(' ');
        f = b == std::string::npos ? std::string{} : f.substr(b);
    }
    return fields;
}

} // namespace

std::vector<PerformanceRecord> import_performance(std::istream & in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw PerformanceError("performance file is empty; expected header user_id,activity_id,points");
    }
    if (line.starts_with("\xEF\xBB\xBF")) {
        line.erase(0, 3);
    }
    auto const header = split_csv(line);
    auto column = [&](std::string_view name) {
        auto const it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw PerformanceError(fmt::format("missing column '{}' in header", name));
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t const user_col = column("user_id");
    std::size_t const activity_col = column("activity_id");
    std::size_t const points_col = column("points");

    std::vector<PerformanceRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto const fields = split_csv(line);
        if (fields.size() < header.size()) {
            throw PerformanceError(fmt::format("line {}: expected {} columns, got {}",
                                               line_no, header.size(), fields.size()));
        }
        PerformanceRecord r;
        r.user_id = fields[user_col];
        r.activity_id = fields[activity_col];
        std::string const & pts = fields[points_col];
        std::size_t used = 0;
        try {
            r.points = std::stod(pts, &used);
        } catch (std::exception const &) {
            used = 0;
        }
        if (pts.empty() || used != pts.size() || !std::isfinite(r.points)) {
            throw PerformanceError(fmt::format("line {}: points '{}' is not a number",
                                               line_no, pts));
        }
        if (r.points < 0) {
            throw PerformanceError(fmt::format("line {}: negative points {} for ({}, {})",
                                               line_no, pts, r.user_id, r.activity_id));
        }
        if (!seen.emplace(r.user_id, r.activity_id).second) {
            throw PerformanceError(fmt::format("line {}: duplicate key ({}, {})", line_no,
                                               r.user_id, r.activity_id));
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PerformanceRecord> import_performance(std::filesystem::path const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PerformanceError(fmt::format("cannot read '{}'", path.string()));
    }
    return import_performance(in);
}

void write_performance(std::ostream & out, std::vector<PerformanceRecord> const & records)
{
    out << "user_id,activity_id,points\n";
    for (auto const & r : records) {
        out << r.user_id << ',' << r.activity_id << ',' << fmt::format("{}", r.points) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Files and class config

void write_file_atomic(std::filesystem::path const & path, std::string_view contents)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw StorageError(fmt::format("cannot write '{}'", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::ordered_json to_json(ClassContext const & ctx)
{
    ordered_json j;
    j["class_id"] = ctx.class_id;
    j["name"] = ctx.name;
    j["avoid_set"] = ctx.avoid_set;
    j["backend_params"] = {
        {"model", ctx.backend_params.model},
        {"temperature", ctx.backend_params.temperature},
        {"max_tokens", ctx.backend_params.max_tokens},
    };
    return j;
}

ClassContext class_context_from_json(nlohmann::json const & j)
{
    ClassContext ctx;
    ctx.class_id = j.value("class_id", ctx.class_id);
    ctx.name = j.value("name", std::string{});
    if (j.contains("avoid_set")) {
        ctx.avoid_set = j.at("avoid_set").get<std::vector<std::string>>();
    }
    if (j.contains("backend_params")) {
        auto const & p = j.at("backend_params");
        ctx.backend_params.model = p.value("model", ctx.backend_params.model);
        ctx.backend_params.temperature = p.value("temperature", ctx.backend_params.temperature);
        ctx.backend_params.max_tokens = p.value("max_tokens", ctx.backend_params.max_tokens);
    }
    return normalized(std::move(ctx));
}

ClassContext read_class_context(std::filesystem::path const & path)
{
    return class_context_from_json(nlohmann::json::parse(read_file(path)));
}

void write_class_context(std::filesystem::path const & path, ClassContext const & ctx)
{
    write_file_atomic(path, to_json(ctx).dump(2) + "\n");
}

} // namespace tutorguard
