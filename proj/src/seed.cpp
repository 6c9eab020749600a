// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/seed.hpp"

#include "tutorguard/analytics/dedup.hpp"
#include "tutorguard/analytics/flags.hpp"
#include "tutorguard/analytics/usage.hpp"
#include "tutorguard/prompts.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace tutorguard::seed {

namespace {

using Rng = std::mt19937_64;
using ordered_json = nlohmann::ordered_json;

// Largest-remainder apportionment of `total` in proportion to `weights`.
std::vector<std::size_t> apportion(std::size_t total, std::vector<double> const & weights)
{
    double const sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> out(weights.size(), 0);
    if (weights.empty() || sum <= 0.0) return out;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double const exact = static_cast<double>(total) * weights[i] / sum;
        out[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += out[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](auto const & l, auto const & r) { return l.first > r.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        ++out[remainders[k % remainders.size()].second];
    }
    return out;
}

template <typename T>
T const & pick(Rng & rng, std::vector<T> const & xs)
{
    std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
    return xs[d(rng)];
}

long uniform(Rng & rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

double unit(Rng & rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// ---------------------------------------------------------------------------
// Text material

std::vector<std::string> const names = {
    "total", "count", "value", "result", "items", "scores", "grades", "names", "words",
    "numbers", "data", "temp", "index", "answer", "letters", "prices", "ages", "rows",
    "text", "line", "vowels", "evens", "odds", "pairs", "chars", "digits", "tokens"};

std::vector<std::string> const functions = {
    "middle_remover", "count_vowels", "average_grade", "find_max", "reverse_words",
    "is_palindrome", "sum_digits", "clean_data", "word_lengths", "make_acronym",
    "filter_evens", "total_price", "grade_report", "merge_lists", "title_case",
    "fizz_buzz", "remove_dupes", "char_count", "running_sum", "max_gap"};

std::vector<std::string> const types = {"string", "list", "dictionary", "integer", "tuple"};

std::string identifier(Rng & rng)
{
    static std::string const letters = "abcdefghijklmnopqrstuvwxyz";
    std::string s = pick(rng, names);
    s += '_';
    for (int i = 0; i < 3; ++i) s += letters[static_cast<std::size_t>(uniform(rng, 0, 25))];
    return s;
}

std::string code_snippet(Rng & rng)
{
    auto const f = pick(rng, functions);
    auto const a = identifier(rng);
    auto const v = identifier(rng);
    auto const w = identifier(rng);
    long const n = uniform(rng, 2, 99);
    switch (uniform(rng, 0, 5)) {
    case 0:
        return fmt::format("def {}({}):\n    {} = 0\n    for x in {}:\n        {} += x * {}\n    return {}",
                           f, a, v, a, v, n, v);
    case 1:
        return fmt::format("{} = input(\"Enter {}: \")\nif {} > {}:\n    print(\"big\", {})\nelse:\nprint({})",
                           v, w, v, n, w, v);
    case 2:
        return fmt::format("import pandas as pd\n{} = pd.read_csv(\"{}.csv\")\n{} = {}[{}[\"{}\"] > {}]\nprint({}.head())",
                           v, w, a, v, v, w, n, a);
    case 3:
        return fmt::format("def {}({}, {}):\n    {} = []\n    while len({}) < {}:\n        {}.append({}[{}])\n    return {}",
                           f, a, w, v, v, n, v, a, w, v);
    case 4:
        return fmt::format("{} = {{}}\nfor {} in open(\"{}.txt\"):\n    {}[{}] = {}.get({}, 0) + {}\nprint(sorted({}))",
                           v, w, a, v, w, v, w, n, v);
    default:
        return fmt::format("while {} == \"{}\" and {} != '/':\nprint(\"{} {} is not supported!\")\n{} = {} // {}",
                           v, n, w, a, n, a, v, n);
    }
}

std::string error_message(Rng & rng)
{
    auto const v = identifier(rng);
    long const line = uniform(rng, 2, 60);
    std::vector<std::string> const tails = {
        fmt::format("NameError: name '{}' is not defined", v),
        "TypeError: unsupported operand type(s) for +: 'int' and 'str'",
        "IndexError: list index out of range",
        fmt::format("KeyError: '{}'", v),
        "IndentationError: unindent does not match any outer indentation level",
        fmt::format("AttributeError: 'list' object has no attribute '{}'", v),
        fmt::format("ValueError: invalid literal for int() with base 10: '{}'", v),
        "SyntaxError: invalid syntax",
        "ZeroDivisionError: division by zero",
        fmt::format("TypeError: '{}' object is not subscriptable", pick(rng, types)),
    };
    return fmt::format("Traceback (most recent call last):\n  File \"{}.py\", line {}, in <module>\n    {} = {}({})\n{}",
                       pick(rng, functions), line, v, pick(rng, functions), identifier(rng),
                       pick(rng, tails));
}

std::string outcome_sentence(Rng & rng)
{
    auto const f = pick(rng, functions);
    auto const v = identifier(rng);
    switch (uniform(rng, 0, 3)) {
    case 0: return fmt::format("my {} function should return the {} of the list but it returns None", f, v);
    case 1: return fmt::format("I want {} to print each {} on its own line but it prints them all at once", f, v);
    case 2: return fmt::format("this is supposed to count the {} in the file but it always gives {}", v, uniform(rng, 0, 9));
    default: return fmt::format("{} should skip the header row and keep only {} above {}", f, v, uniform(rng, 10, 90));
    }
}

std::string error_question(Rng & rng)
{
    switch (uniform(rng, 0, 4)) {
    case 0: return "why am i getting this error";
    case 1: return fmt::format("what does this error mean in {}", pick(rng, functions));
    case 2: return fmt::format("I don't understand this error on line {}", uniform(rng, 2, 60));
    case 3: return fmt::format("can you explain why {} crashes", pick(rng, functions));
    default: return fmt::format("why is {} not defined", identifier(rng));
    }
}

std::string implementation_question(Rng & rng)
{
    auto const f = pick(rng, functions);
    switch (uniform(rng, 0, 3)) {
    case 0: return fmt::format("How do I get {} to ignore {}?", f, identifier(rng));
    case 1: return fmt::format("how would I start {} for part {}", f, uniform(rng, 1, 6));
    case 2: return fmt::format("How can I store {} in a {} and return it?", identifier(rng), pick(rng, types));
    default: return fmt::format("what should I loop over to build {}", identifier(rng));
    }
}

std::string understanding_question(Rng & rng)
{
    std::vector<std::string> const pairs_a = {"append", "return", "a list", "a for loop", "==", "split()", "a method"};
    std::vector<std::string> const pairs_b = {"extend", "print", "a tuple", "a while loop", "is", "strip()", "a function"};
    std::size_t const i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(pairs_a.size()) - 1));
    switch (uniform(rng, 0, 2)) {
    case 0: return fmt::format("What is the difference between {} and {}? (asking about {})", pairs_a[i], pairs_b[i], identifier(rng));
    case 1: return fmt::format("What does {} actually do to a {} like {}?", pairs_a[i], pick(rng, types), identifier(rng));
    default: return fmt::format("When should I use {} instead of {} for {}?", pairs_b[i], pairs_a[i], identifier(rng));
    }
}

std::vector<std::string> const short_issues = {"", "", "help", "??", "fix", "error", "idk", "pls", "why"};

std::vector<std::string> const off_topic_questions = {
    "What is the meaning of life?",
    "Can you recommend a good movie for tonight?",
    "Who is going to win the game this weekend?",
    "Write me a poem about the ocean please",
};

ExerciseText make_exercise(Rng & rng, std::size_t index)
{
    auto const f = functions[index % functions.size()];
    auto const type = pick(rng, types);
    auto const param = identifier(rng);
    std::vector<std::string> const sentences = {
        fmt::format("If the {} has an even number of elements, return the {} with the middle two elements removed.", type, type),
        fmt::format("If the {} is empty, your function should return {} without raising an error.", type, identifier(rng)),
        fmt::format("Use a loop rather than a built-in function to compute the {}.", pick(rng, names)),
        fmt::format("Store intermediate results in a variable called {} and return it at the end.", identifier(rng)),
        fmt::format("Do not modify the original {}; build and return a new one instead.", type),
        "Test your function on at least three different inputs and print the results.",
    };
    std::string text = fmt::format("Write a fruitful function called {}() that takes a {} called {} as an argument.",
                                   f, type, param);
    std::vector<std::size_t> order(sentences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k : order) {
        text += ' ';
        text += sentences[k];
        if (text.size() >= 260) break;
    }
    return {fmt::format("ex{:02d}_{}", index + 1, f), text};
}

std::vector<std::string> const canned_responses = {
    "Start by looking at what each variable holds when the loop begins. The `len()` function tells you how many items there are, and you can compare that with the index you are using.",
    "This error means Python reached a name it has never seen assigned. Check the spelling where the variable is first created and where it is used.",
    "Think about the problem in steps: first decide what information you need to keep track of, then decide which loop visits every element once.",
};

// ---------------------------------------------------------------------------
// Usage planning

struct UserPlan
{
    std::string user_id;
    std::size_t queries = 0;
    std::size_t sessions = 0;
    long total_length = 0;           // sum of session lengths in seconds
    bool outlier = false;
};

analytics::UsageRecord usage_of(UserPlan const & p)
{
    return {p.user_id, p.queries, p.sessions,
            static_cast<double>(p.total_length) / static_cast<double>(p.sessions)};
}

// Plans per-user queries, sessions and total session time for the regular
// users so that the standardized metrics reach the target alpha.
std::vector<UserPlan> plan_usage(Rng & rng, std::size_t users, std::size_t queries,
                                 double target_alpha, double & realized_alpha)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    double const loading = 0.83;
    double const unique = std::sqrt(1.0 - loading * loading);
    double const mean_q = static_cast<double>(queries) / static_cast<double>(users);

    std::vector<UserPlan> best;
    double best_gap = 1e9;
    for (int attempt = 0; attempt < 4000; ++attempt) {
        std::vector<double> qw(users);
        std::vector<double> sw(users);
        std::vector<double> lw(users);
        for (std::size_t i = 0; i < users; ++i) {
            double const z = normal(rng);
            qw[i] = std::exp(0.8 * (loading * z + unique * normal(rng)));
            sw[i] = std::exp(0.7 * (loading * z + unique * normal(rng)));
            lw[i] = std::exp(0.9 * (loading * z + unique * normal(rng)));
        }
        auto const extra = apportion(queries - 2 * users, qw);
        std::vector<UserPlan> plan(users);
        double const sw_mean = std::accumulate(sw.begin(), sw.end(), 0.0) / static_cast<double>(users);
        double const lw_mean = std::accumulate(lw.begin(), lw.end(), 0.0) / static_cast<double>(users);
        for (std::size_t i = 0; i < users; ++i) {
            auto & p = plan[i];
            p.queries = extra[i] + 2;
            double const s_target = 0.34 * mean_q * sw[i] / sw_mean;
            p.sessions = static_cast<std::size_t>(std::clamp<double>(
                std::round(s_target), 1.0, static_cast<double>(p.queries - 1)));
            std::size_t const gaps = p.queries - p.sessions;
            double const avg_target = 885.0 * lw[i] / lw_mean;
            p.total_length = std::clamp<long>(
                std::lround(avg_target * static_cast<double>(p.sessions)),
                static_cast<long>(20 * gaps), static_cast<long>(3500 * gaps));
        }

        std::vector<analytics::UsageRecord> usage;
        for (auto const & p : plan) usage.push_back(usage_of(p));
        try {
            double const alpha = analytics::composite_usage(usage).cronbach_alpha;
            double const gap = std::fabs(alpha - target_alpha);
            if (gap < best_gap) {
                best_gap = gap;
                best = plan;
                realized_alpha = alpha;
            }
            if (gap <= 0.005) break;
        } catch (analytics::AnalyticsError const &) {
            continue;
        }
    }
    if (best.empty()) {
        throw std::runtime_error("seed: could not plan usage with non-zero variance");
    }
    return best;
}

// Splits `total` seconds into `count` gaps each within [lo, hi].
std::vector<long> split_gaps(Rng & rng, std::size_t count, long total, long lo, long hi)
{
    std::vector<long> gaps(count, lo);
    long remaining = total - lo * static_cast<long>(count);
    while (remaining > 0) {
        std::vector<double> w(count);
        for (std::size_t k = 0; k < count; ++k) w[k] = gaps[k] < hi ? 0.1 + unit(rng) : 0.0;
        auto const add = apportion(static_cast<std::size_t>(remaining), w);
        for (std::size_t k = 0; k < count; ++k) {
            long const room = hi - gaps[k];
            long const take = std::min(room, static_cast<long>(add[k]));
            gaps[k] += take;
            remaining -= take;
        }
    }
    return gaps;
}

struct Slot
{
    std::string user_id;
    Timestamp time{};
    bool duplicate = false;
    Category category = Category::nothing;
    HelpRequest request;
};

std::vector<Timestamp> user_timeline(Rng & rng, UserPlan const & p, Timestamp semester_start)
{
    // Queries per session: one each, the rest spread at random.
    std::vector<double> w(p.sessions);
    for (auto & x : w) x = 0.2 + unit(rng);
    auto per_session = apportion(p.queries - p.sessions, w);
    for (auto & c : per_session) c += 1;

    std::vector<double> lw;
    std::vector<std::size_t> multi;
    for (std::size_t s = 0; s < p.sessions; ++s) {
        if (per_session[s] > 1) {
            multi.push_back(s);
            lw.push_back(static_cast<double>(per_session[s] - 1) * (0.5 + unit(rng)));
        }
    }
    std::size_t const gap_count = p.queries - p.sessions;
    auto const gaps = split_gaps(rng, gap_count, p.total_length, 20, 3500);

    std::vector<Timestamp> times;
    Timestamp t = semester_start + std::chrono::seconds{uniform(rng, 0, 3 * 86400)};
    std::size_t g = 0;
    for (std::size_t s = 0; s < p.sessions; ++s) {
        if (s > 0) t += std::chrono::seconds{uniform(rng, 7200, 4 * 86400)};
        times.push_back(t);
        for (std::size_t q = 1; q < per_session[s]; ++q) {
            t += std::chrono::seconds{gaps[g++]};
            times.push_back(t);
        }
    }
    return times;
}

// ---------------------------------------------------------------------------
// Content

struct ContentContext
{
    analytics::ExerciseIndex const & index;
    std::vector<ExerciseText> const & exercises;
};

HelpRequest content_for(Rng & rng, Category c, bool copy_exercise, ContentContext const & ctx)
{
    HelpRequest r;
    r.language = "Python";
    switch (c) {
    case Category::debugging_error_only:
        r.code = code_snippet(rng);
        r.error = error_message(rng);
        r.issue = error_question(rng);
        break;
    case Category::debugging_outcome_only:
        r.code = code_snippet(rng);
        r.issue = outcome_sentence(rng);
        break;
    case Category::debugging_error_and_outcome:
        r.code = code_snippet(rng);
        r.error = error_message(rng);
        r.issue = error_question(rng) + ". " + outcome_sentence(rng);
        break;
    case Category::implementation:
        if (copy_exercise) {
            auto const & ex = pick(rng, ctx.exercises);
            r.issue = (unit(rng) < 0.5 ? "How do I " : "") + ex.text;
            if (unit(rng) < 0.3) r.code = code_snippet(rng);
        } else {
            r.issue = implementation_question(rng);
            if (unit(rng) < 0.6) r.code = code_snippet(rng);
        }
        break;
    case Category::understanding:
        r.issue = understanding_question(rng);
        break;
    case Category::nothing:
        r.code = code_snippet(rng);
        r.issue = pick(rng, short_issues);
        break;
    case Category::off_topic:
        r.issue = pick(rng, off_topic_questions) + " " + identifier(rng);
        break;
    }
    return r;
}

// A near copy: identical, or one character changed in the longest field.
HelpRequest resubmission_of(Rng & rng, HelpRequest const & anchor)
{
    HelpRequest r = anchor;
    std::string * fields[] = {&r.code, &r.error, &r.issue};
    auto longest = std::max_element(std::begin(fields), std::end(fields),
                                    [](auto * l, auto * rr) { return l->size() < rr->size(); });
    std::string & f = **longest;
    if (f.size() >= 12 && unit(rng) < 0.6) {
        // Change one ASCII character to keep the distance small.
        std::size_t pos = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(f.size()) - 1));
        for (std::size_t k = 0; k < f.size(); ++k) {
            std::size_t const at = (pos + k) % f.size();
            unsigned char const ch = static_cast<unsigned char>(f[at]);
            if (ch >= 'a' && ch <= 'z') {
                f[at] = ch == 'z' ? 'a' : static_cast<char>(ch + 1);
                break;
            }
        }
    }
    return r;
}

} // namespace

Corpus generate(SeedOptions const & options)
{
    if (options.profile != "table1") {
        throw std::invalid_argument(fmt::format("unknown seed profile '{}'", options.profile));
    }
    if (options.users < 3) {
        throw std::invalid_argument("seed needs at least 3 users");
    }
    if (options.queries < 4 * options.users) {
        throw std::invalid_argument(
            fmt::format("seed needs at least 4 queries per user ({} for {} users)",
                        4 * options.users, options.users));
    }

    using P = ReferenceProfile;
    Rng rng(options.seed);
    double const f = static_cast<double>(options.queries) / static_cast<double>(P::queries);
    std::size_t const n_users = options.users;
    std::size_t const n_queries = options.queries;

    bool const with_outlier = n_users >= 6;
    std::size_t const regular_users = with_outlier ? n_users - 1 : n_users;
    std::size_t outlier_queries = 0;
    if (with_outlier) {
        outlier_queries = static_cast<std::size_t>(std::lround(P::outlier_queries * f));
        outlier_queries = std::min(outlier_queries, n_queries - 4 * regular_users);
        outlier_queries = std::max<std::size_t>(outlier_queries, 4);
    }

    // Per-user usage.
    double alpha = 0.0;
    auto plans = plan_usage(rng, regular_users, n_queries - outlier_queries, P::cronbach_alpha, alpha);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        plans[i].user_id = fmt::format("u{:03d}", i + 1);
    }
    if (with_outlier) {
        UserPlan o;
        o.user_id = fmt::format("u{:03d}", n_users);
        o.queries = outlier_queries;
        o.sessions = std::max<std::size_t>(1, outlier_queries / 8);
        o.total_length = static_cast<long>(1500 * o.sessions);
        o.total_length = std::clamp<long>(o.total_length, 20L * static_cast<long>(o.queries - o.sessions),
                                          3500L * static_cast<long>(o.queries - o.sessions));
        o.outlier = true;
        plans.push_back(o);
    }

    // Timelines.
    Timestamp const semester_start = std::chrono::sys_days{std::chrono::year{2023} / 2 / 6}
        + std::chrono::hours{8};
    std::vector<std::vector<Slot>> streams;
    for (auto const & p : plans) {
        std::vector<Slot> stream;
        for (auto t : user_timeline(rng, p, semester_start)) {
            stream.push_back(Slot{p.user_id, t, false, Category::nothing, {}});
        }
        streams.push_back(std::move(stream));
    }

    // Planted duplicates among non-first slots.
    std::size_t const n_duplicates = std::min(
        static_cast<std::size_t>(std::lround(P::duplicates * f)), n_queries - n_users);
    {
        std::vector<Slot *> candidates;
        for (auto & s : streams) {
            for (std::size_t k = 1; k < s.size(); ++k) candidates.push_back(&s[k]);
        }
        std::shuffle(candidates.begin(), candidates.end(), rng);
        for (std::size_t k = 0; k < n_duplicates; ++k) candidates[k]->duplicate = true;
    }
    std::size_t const n_kept = n_queries - n_duplicates;

    // Category multiset for the kept queries.
    std::size_t const n_off_topic = std::min(static_cast<std::size_t>(std::lround(P::off_topic * f)), n_kept);
    std::size_t const n_labeled = n_kept - n_off_topic;
    auto const top = apportion(n_labeled, {P::debugging, P::implementation, P::understanding, P::nothing});
    auto const sub = apportion(top[0], {P::debugging_error_only, P::debugging_outcome_only,
                                        P::debugging_error_and_outcome});
    std::vector<Category> categories;
    auto add = [&](Category c, std::size_t n) { categories.insert(categories.end(), n, c); };
    add(Category::debugging_error_only, sub[0]);
    add(Category::debugging_outcome_only, sub[1]);
    add(Category::debugging_error_and_outcome, sub[2]);
    add(Category::implementation, top[1]);
    add(Category::understanding, top[2]);
    add(Category::nothing, top[3]);
    add(Category::off_topic, n_off_topic);
    std::shuffle(categories.begin(), categories.end(), rng);
    {
        std::size_t k = 0;
        for (auto & s : streams) {
            for (auto & slot : s) {
                if (!slot.duplicate) slot.category = categories[k++];
            }
        }
    }

    // Exercises and query text.
    Corpus corpus;
    std::size_t const n_exercises = 12;
    for (std::size_t i = 0; i < n_exercises; ++i) corpus.exercises.push_back(make_exercise(rng, i));
    analytics::ExerciseIndex const index(corpus.exercises);
    ContentContext const ctx{index, corpus.exercises};

    std::size_t short_count = 0;
    std::size_t copied_count = 0;
    for (auto & s : streams) {
        HelpRequest const * anchor = nullptr;
        for (auto & slot : s) {
            if (slot.duplicate) {
                slot.request = resubmission_of(rng, *anchor);
                continue;
            }
            bool const copy = slot.category == Category::implementation && unit(rng) < 0.3;
            HelpRequest r;
            for (int attempt = 0;; ++attempt) {
                r = content_for(rng, slot.category, copy, ctx);
                if (attempt > 200) {
                    throw std::runtime_error("seed: cannot make distinct query content");
                }
                if (anchor && analytics::query_similarity(*anchor, r) < 0.6) continue;
                bool const is_short = analytics::flag_short_issue(r.issue);
                if (is_short != (slot.category == Category::nothing)) continue;
                if (!copy && !r.issue.empty() && index.copied_percentage(r.issue) >= 70.0) continue;
                break;
            }
            short_count += analytics::flag_short_issue(r.issue) ? 1 : 0;
            copied_count += copy ? 1 : 0;
            slot.request = std::move(r);
            anchor = &slot.request;
        }
    }

    // Receipt order across users, then ids.
    std::vector<Slot *> ordered;
    for (auto & s : streams) {
        for (auto & slot : s) ordered.push_back(&slot);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](Slot const * l, Slot const * r) { return l->time < r->time; });

    std::size_t disagreements = 0;
    std::uint64_t seq = 0;
    for (auto * slot : ordered) {
        ++seq;
        auto & req = slot->request;
        req.id = fmt::format("q{:05d}", seq);
        req.user_id = slot->user_id;
        req.timestamp = slot->time;

        QueryLogRecord rec;
        rec.seq = seq;
        rec.request = req;
        rec.response.request_id = req.id;
        rec.response.main_text = canned_responses[seq % canned_responses.size()];
        rec.response.template_version = std::string(prompts::template_version);
        ClassContext const cls;
        rec.response.trace.push_back({"sufficiency", prompts::build_sufficiency_prompt(req, cls),
                                      "The student is asking for help with their code. OK.", std::nullopt});
        rec.response.trace.push_back({"main", prompts::build_main_prompt(req, cls),
                                      rec.response.main_text, std::nullopt});
        corpus.log.push_back(std::move(rec));

        if (slot->duplicate) continue;
        Category const c = slot->category;
        corpus.labels.push_back({req.id, "rater1", c});
        Category second = c;
        if (is_debugging(c) && unit(rng) < 0.12) {
            std::vector<Category> const others = {Category::debugging_error_only,
                                                  Category::debugging_outcome_only,
                                                  Category::debugging_error_and_outcome};
            while (second == c) second = pick(rng, others);
        } else if (unit(rng) < 0.05) {
            std::vector<Category> const others = {Category::debugging_error_only,
                                                  Category::implementation,
                                                  Category::understanding, Category::nothing};
            while (top_level(second) == top_level(c)) second = pick(rng, others);
        }
        disagreements += second != c ? 1 : 0;
        corpus.labels.push_back({req.id, "rater2", second});
    }

    // Course performance planted against the composite of the regular users.
    std::vector<analytics::UsageRecord> usage;
    for (auto const & p : plans) usage.push_back(usage_of(p));
    std::set<std::string> excluded;
    if (with_outlier) excluded.insert(plans.back().user_id);
    auto const composite = analytics::composite_usage(usage, excluded);

    std::vector<double> u;
    for (auto const & s : composite.scores) u.push_back(s.score);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> e(u.size());
    for (auto & x : e) x = normal(rng);
    // Orthogonalize noise against the (centered, unit) usage scores.
    double const u_mean = analytics::mean(u);
    double const u_sd = analytics::sample_sd(u);
    std::vector<double> uz(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) uz[i] = (u[i] - u_mean) / u_sd;
    double const e_mean = analytics::mean(e);
    for (auto & x : e) x -= e_mean;
    double dot = 0.0;
    double uu = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += e[i] * uz[i];
        uu += uz[i] * uz[i];
    }
    for (std::size_t i = 0; i < u.size(); ++i) e[i] -= dot / uu * uz[i];
    double const e_sd = analytics::sample_sd(e);
    double const r_target = P::correlation_r;
    std::map<std::string, double> latent;
    for (std::size_t i = 0; i < u.size(); ++i) {
        latent[composite.scores[i].user_id] =
            r_target * uz[i] + std::sqrt(1.0 - r_target * r_target) * e[i] / e_sd;
    }
    if (with_outlier) latent[plans.back().user_id] = 1.5;

    std::vector<std::string> const activities = {
        "quiz1", "quiz2", "quiz3", "quiz4", "assignment1", "assignment2",
        "assignment3", "assignment4", "reading1", "reading2"};
    for (auto const & activity : activities) {
        double const center = 2.5 + unit(rng);
        double const scale = 0.2 + 0.2 * unit(rng);
        for (auto const & p : plans) {
            double const points = std::expm1(center + scale * latent.at(p.user_id));
            corpus.performance.push_back({p.user_id, activity, std::round(points * 100.0) / 100.0});
        }
    }
    auto const perf = analytics::course_performance(
        corpus.performance, [&] {
            std::set<std::string> s;
            for (auto const & sc : composite.scores) s.insert(sc.user_id);
            return s;
        }());
    std::vector<double> pv;
    for (auto const & ps : perf) pv.push_back(ps.score);
    auto const realized = analytics::pearson(u, pv);

    // Manifest.
    std::size_t total_sessions = 0;
    double mean_queries = 0.0;
    for (auto const & p : plans) {
        total_sessions += p.sessions;
        mean_queries += static_cast<double>(p.queries);
    }
    mean_queries /= static_cast<double>(plans.size());

    auto & m = corpus.manifest;
    m["profile"] = options.profile;
    m["seed"] = options.seed;
    m["users"] = n_users;
    m["queries"] = n_queries;
    m["duplicates"] = n_duplicates;
    m["kept"] = n_kept;
    m["labeled"] = n_labeled;
    m["off_topic"] = n_off_topic;
    m["categories"] = {
        {"Debugging", top[0]},
        {"Implementation", top[1]},
        {"Understanding", top[2]},
        {"Nothing", top[3]},
    };
    auto pct = [&](std::size_t c, std::size_t base) {
        return std::lround(100.0 * static_cast<double>(c) / static_cast<double>(base));
    };
    m["category_percent_rounded"] = {
        {"Debugging", pct(top[0], n_labeled)},
        {"Implementation", pct(top[1], n_labeled)},
        {"Understanding", pct(top[2], n_labeled)},
        {"Nothing", pct(top[3], n_labeled)},
    };
    m["debugging_subcategories"] = {
        {"Including error", sub[0]},
        {"Including outcome", sub[1]},
        {"Including error & outcome", sub[2]},
    };
    m["rater_disagreements"] = disagreements;
    m["short_issue"] = short_count;
    m["copied"] = copied_count;
    m["exercises"] = n_exercises;
    m["total_sessions"] = total_sessions;
    m["mean_total_queries"] = mean_queries;
    if (with_outlier) {
        m["outlier"] = {{"user_id", plans.back().user_id}, {"total_queries", outlier_queries}};
    } else {
        m["outlier"] = nullptr;
    }
    m["cronbach_alpha_target"] = P::cronbach_alpha;
    m["cronbach_alpha"] = composite.cronbach_alpha;
    m["correlation_target_r"] = r_target;
    m["correlation_r"] = realized.r;
    m["correlation_n"] = realized.n;
    (void)alpha;
    return corpus;
}

void write(Corpus const & corpus, std::filesystem::path const & out_dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "exercises");

    std::string log;
    for (auto const & r : corpus.log) {
        log += encode_record(r);
        log += '\n';
    }
    write_file_atomic(out_dir / "log.jsonl", log);

    std::string labels;
    for (auto const & l : corpus.labels) {
        labels += encode_label(l);
        labels += '\n';
    }
    write_file_atomic(out_dir / "labels.jsonl", labels);

    std::ostringstream perf;
    write_performance(perf, corpus.performance);
    write_file_atomic(out_dir / "performance.csv", perf.str());

    for (auto const & e : corpus.exercises) {
        write_file_atomic(out_dir / "exercises" / (e.exercise_id + ".txt"), e.text + "\n");
    }
    write_file_atomic(out_dir / "manifest.json", corpus.manifest.dump(2) + "\n");
}

} // namespace tutorguard::seed
