// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/persistence.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "support.hpp"

namespace tutorguard {
namespace {

using testing::TempDir;

QueryLogRecord record(std::string id, std::string user = "u1", std::int64_t t = 0)
{
    QueryLogRecord r;
    r.request = testing::query(std::move(id), std::move(user), t, "x = 1\n", "", "why \"quoted\" é");
    r.response.request_id = r.request.id;
    r.response.main_text = "Look at `x`.";
    r.response.template_version = "tutorguard-prompts/1";
    r.response.trace = {{"sufficiency", "p1", "OK.", std::nullopt}, {"main", "p2", "Look at `x`.", std::nullopt}};
    return r;
}

std::string slurp(std::filesystem::path const & p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(RecordCodec, FixedKeyOrderAndRoundTrip)
{
    auto r = record("q1");
    r.seq = 4;
    auto const line = encode_record(r);
    EXPECT_TRUE(line.starts_with(R"({"schema_version":1,"seq":4,"id":"q1","user_id":"u1","timestamp":"2023-02-06T08:00:00Z","language":"Python","code":"x = 1\n","error":"","issue":)"))
        << line;
    EXPECT_NE(line.find(R"("status":"ok","failure":null,"main_text")"), std::string::npos);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(decode_record(line), r);
}

TEST(RecordCodec, RejectsUnknownSchema)
{
    auto line = encode_record(record("q1"));
    line.replace(line.find("\"schema_version\":1"), 18, "\"schema_version\":9");
    EXPECT_THROW(decode_record(line), std::invalid_argument);
    EXPECT_THROW(decode_record("{not json"), std::invalid_argument);
}

TEST(LogStore, AppendThenLoad)
{
    TempDir dir;
    LogStore store(dir / "log.jsonl");
    auto const seq1 = store.append(record("q1"));
    auto const seq2 = store.append(record("q2"));
    EXPECT_LT(seq1, seq2);
    auto const all = store.load_all();
    ASSERT_EQ(all.size(), 2u);
    auto expected = record("q1");
    expected.seq = seq1;
    EXPECT_EQ(all[0], expected);
    EXPECT_EQ(store.find("q2")->seq, seq2);
    EXPECT_FALSE(store.find("nope").has_value());
    EXPECT_THROW(store.append(record("q1")), StorageError);
}

TEST(LogStore, ReopenKeepsRecords)
{
    TempDir dir;
    {
        LogStore store(dir / "log.jsonl");
        store.append(record("q1"));
        store.append(record("q2"));
    }
    LogStore store(dir / "log.jsonl");
    EXPECT_EQ(store.size(), 2u);
    EXPECT_EQ(store.append(record("q3")), 3u);
}

TEST(LogStore, TornTailIsTruncated)
{
    TempDir dir;
    auto const path = dir / "log.jsonl";
    {
        LogStore store(path);
        store.append(record("q1"));
    }
    auto const intact = slurp(path);
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        auto partial = encode_record(record("q2"));
        out << partial.substr(0, partial.size() / 2);
    }
    LogStore store(path);
    EXPECT_EQ(store.size(), 1u);
    EXPECT_GT(store.recovered_bytes(), 0u);
    EXPECT_EQ(slurp(path), intact);
    store.append(record("q2"));
    EXPECT_EQ(LogStore(path).size(), 2u);
}

TEST(LogStore, CompleteRecordMissingNewlineIsKept)
{
    TempDir dir;
    auto const path = dir / "log.jsonl";
    auto r = record("q1");
    r.seq = 1;
    {
        std::ofstream out(path, std::ios::binary);
        out << encode_record(r);
    }
    LogStore store(path);
    EXPECT_EQ(store.size(), 1u);
    store.append(record("q2"));
    EXPECT_EQ(LogStore(path).size(), 2u);
}

TEST(LogStore, CorruptMiddleLineIsAnError)
{
    TempDir dir;
    auto const path = dir / "log.jsonl";
    {
        std::ofstream out(path, std::ios::binary);
        out << "garbage\n" << encode_record(record("q1")) << "\n";
    }
    EXPECT_THROW(LogStore{path}, StorageError);
}

TEST(LogStore, KilledWriterLeavesRecoverableLog)
{
    TempDir dir;
    auto const path = dir / "log.jsonl";
    pid_t const pid = ::fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        LogStore store(path);
        for (int i = 0;; ++i) store.append(record("q" + std::to_string(i)));
    }
    ::usleep(200'000);
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);

    LogStore store(path);
    auto const n = store.size();
    EXPECT_GT(n, 0u);
    auto const all = store.load_all();
    for (std::size_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(all[i].request.id, "q" + std::to_string(i));
        EXPECT_EQ(all[i].seq, i + 1);
    }
    store.append(record("after"));
    EXPECT_EQ(LogStore(path).size(), n + 1);
}

TEST(LogStore, ExportEmptyAndSmall)
{
    TempDir dir;
    LogStore store(dir / "log.jsonl");
    std::ostringstream empty;
    EXPECT_EQ(store.export_log(empty), 0u);
    EXPECT_EQ(empty.str(), "");
    for (auto id : {"a", "b", "c"}) store.append(record(id));
    std::ostringstream out;
    EXPECT_EQ(store.export_log(out), 3u);
    std::istringstream in(out.str());
    EXPECT_EQ(read_log(in).size(), 3u);
}

TEST(LogStore, ExportImportExportIsByteIdentical)
{
    TempDir dir;
    LogStore a(dir / "a.jsonl");
    for (int i = 0; i < 20; ++i) a.append(record("q" + std::to_string(i), "u" + std::to_string(i % 3), i * 10));
    a.export_log(dir / "first.jsonl");

    LogStore b(dir / "b.jsonl");
    EXPECT_EQ(b.import_log(dir / "first.jsonl"), 20u);
    b.export_log(dir / "second.jsonl");
    EXPECT_EQ(slurp(dir / "first.jsonl"), slurp(dir / "second.jsonl"));
    EXPECT_EQ(LogStore(dir / "b.jsonl").load_all(), a.load_all());
}

TEST(LogStore, ImportIsAllOrNothing)
{
    TempDir dir;
    LogStore store(dir / "log.jsonl");
    auto good = record("q1");
    good.seq = 1;
    std::istringstream in(encode_record(good) + "\n{broken\n");
    try {
        store.import_log(in);
        FAIL();
    } catch (ImportError const & e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_EQ(store.size(), 0u);

    store.append(record("q9"));
    std::istringstream stale(encode_record(good) + "\n");
    EXPECT_THROW(store.import_log(stale), ImportError);   // seq 1 does not follow tail 1
}

TEST(LabelStore, UpsertReplacesAndKeepsHistory)
{
    TempDir dir;
    LabelStore labels(dir / "labels.jsonl");
    EXPECT_FALSE(labels.upsert({"q1", "r1", Category::implementation}));
    EXPECT_FALSE(labels.upsert({"q1", "r2", Category::understanding}));
    EXPECT_TRUE(labels.upsert({"q1", "r1", Category::nothing}));
    auto const current = labels.current();
    ASSERT_EQ(current.size(), 2u);
    EXPECT_EQ(current[0], (QueryLabel{"q1", "r1", Category::nothing}));
    EXPECT_EQ(labels.history().size(), 3u);
    EXPECT_EQ(LabelStore(dir / "labels.jsonl").current(), current);
}

TEST(Labels, CodecUsesWireNames)
{
    auto const line = encode_label({"q1", "r1", Category::debugging_error_and_outcome});
    EXPECT_EQ(line, R"({"query_id":"q1","rater_id":"r1","category":"Debugging:error_and_outcome"})");
    EXPECT_EQ(decode_label(line).category, Category::debugging_error_and_outcome);
    EXPECT_THROW(decode_label(R"({"query_id":"q1","rater_id":"r1","category":"Fixing"})"), std::invalid_argument);
}

TEST(Exercises, EmptyDirectory)
{
    TempDir dir;
    auto const r = import_exercises(dir.path());
    EXPECT_TRUE(r.exercises.empty());
    EXPECT_TRUE(r.failures.empty());
}

TEST(Exercises, LoadsFilesAndReportsBadOnes)
{
    TempDir dir;
    std::ofstream(dir / "ex1.txt") << "Write a function.\n";
    std::ofstream(dir / "ex2.txt") << "Write another function.";
    std::ofstream(dir / "bad.txt", std::ios::binary) << "caf\xE9";
    std::ofstream(dir / "notes.md") << "ignored";
    auto const r = import_exercises(dir.path());
    ASSERT_EQ(r.exercises.size(), 2u);
    EXPECT_EQ(r.exercises[0].exercise_id, "ex1");
    EXPECT_EQ(r.exercises[0].text, "Write a function.");
    EXPECT_EQ(r.exercises[1].exercise_id, "ex2");
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].first.filename(), "bad.txt");
}

TEST(Performance, WellFormedFile)
{
    std::istringstream in("activity_id,user_id,points\nquiz1,u1,10\nquiz1,u2,7.5\n\"quiz,2\",u1,0\n");
    auto const r = import_performance(in);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[1], (PerformanceRecord{"u2", "quiz1", 7.5}));
    EXPECT_EQ(r[2].activity_id, "quiz,2");
}

TEST(Performance, DuplicateKeyIsNamed)
{
    std::istringstream in("user_id,activity_id,points\nu1,quiz1,1\nu1,quiz1,2\n");
    try {
        import_performance(in);
        FAIL();
    } catch (PerformanceError const & e) {
        std::string const msg = e.what();
        EXPECT_NE(msg.find("u1"), std::string::npos) << msg;
        EXPECT_NE(msg.find("quiz1"), std::string::npos) << msg;
    }
}

TEST(Performance, RejectsBadPoints)
{
    for (char const * body : {"u1,quiz1,-1", "u1,quiz1,abc", "u1,quiz1,inf", "u1,quiz1,nan", "u1,quiz1"}) {
        std::istringstream in(std::string("user_id,activity_id,points\n") + body + "\n");
        EXPECT_THROW(import_performance(in), PerformanceError) << body;
    }
    std::istringstream missing("user_id,points\nu1,3\n");
    EXPECT_THROW(import_performance(missing), PerformanceError);
}

TEST(Performance, WriteThenReadRoundTrips)
{
    std::vector<PerformanceRecord> const records = {{"u1", "quiz1", 10.25}, {"u2", "quiz1", 0}};
    std::ostringstream out;
    write_performance(out, records);
    EXPECT_EQ(out.str(), "user_id,activity_id,points\nu1,quiz1,10.25\nu2,quiz1,0\n");
    std::istringstream in(out.str());
    EXPECT_EQ(import_performance(in), records);
}

TEST(ClassConfig, RoundTripsThroughFile)
{
    TempDir dir;
    ClassContext ctx;
    ctx.name = "CS1";
    ctx.avoid_set = {"recursion"};
    ctx.backend_params.temperature = 0.7;
    write_class_context(dir / "class.json", ctx);
    auto const back = read_class_context(dir / "class.json");
    EXPECT_EQ(back.avoid_set, ctx.avoid_set);
    EXPECT_EQ(back.backend_params, ctx.backend_params);
    EXPECT_EQ(back.name, "CS1");
}

} // namespace
} // namespace tutorguard
