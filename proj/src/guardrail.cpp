// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/guardrail.hpp"

#include <fmt/format.h>

#include <future>

namespace tutorguard {

SufficiencyOutcome parse_sufficiency(std::string_view completion)
{
    std::string_view trimmed = completion;
    auto const trailing = [](std::string_view s) -> std::size_t {
        // ASCII whitespace/quotes, plus U+201D and U+2019 closing quotes.
        if (s.empty()) return 0;
        char const c = s.back();
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'
            || c == '"' || c == '\'')
        {
            return 1;
        }
        if (s.size() >= 3 && (s.ends_with("\xE2\x80\x9D") || s.ends_with("\xE2\x80\x99"))) {
            return 3;
        }
        return 0;
    };
    for (std::size_t n = trailing(trimmed); n > 0; n = trailing(trimmed)) {
        trimmed.remove_suffix(n);
    }

    if (trimmed.empty() || trimmed.ends_with("OK.")) {
        return {SufficiencyOutcome::Kind::sufficient, std::nullopt};
    }
    return {SufficiencyOutcome::Kind::needs_clarification, std::string(completion)};
}

EnforcedText enforce_no_code(std::string const & main_text, CompletionBackend & rewrite,
                             CompletionParams const & params, std::string const & prompt_id)
{
    if (detect_code_blocks(main_text).empty()) {
        return {main_text, false, false, std::nullopt};
    }

    EnforcedText out;
    out.code_was_removed = true;
    TraceEntry entry{"rewrite", prompts::build_removal_prompt(main_text), {}, std::nullopt};
    try {
        entry.completion = rewrite.complete({prompt_id, entry.prompt, params});
        if (detect_code_blocks(entry.completion).empty()) {
            out.text = entry.completion;
        } else {
            out.text = strip_code_blocks(entry.completion);
            out.fallback_strip_applied = true;
            entry.note = "rewrite still contained code blocks; stripped mechanically";
        }
    } catch (BackendError const & e) {
        out.text = strip_code_blocks(main_text);
        out.fallback_strip_applied = true;
        entry.note = fmt::format("rewrite failed ({}): {}; original stripped mechanically",
                                 to_string(e.kind()), e.what());
    }
    out.rewrite_trace = std::move(entry);
    return out;
}

AssistanceResponse respond(HelpRequest const & req, ClassContext const & ctx,
                           Backends const & backends)
{
    TraceEntry sufficiency{"sufficiency", prompts::build_sufficiency_prompt(req, ctx), {}, {}};
    TraceEntry main{"main", prompts::build_main_prompt(req, ctx), {}, {}};

    auto & chat = *backends.chat;
    auto sufficiency_future = std::async(std::launch::async, [&] {
        return chat.complete({req.id + "/sufficiency", sufficiency.prompt, ctx.backend_params});
    });
    auto main_future = std::async(std::launch::async, [&] {
        return chat.complete({req.id + "/main", main.prompt, ctx.backend_params});
    });

    // Collect both before acting on either failure so no task outlives
    // the prompts it references.
    std::exception_ptr main_failure;
    try {
        main.completion = main_future.get();
    } catch (...) {
        main_failure = std::current_exception();
    }

    AssistanceResponse response;
    response.request_id = req.id;
    response.template_version = std::string(prompts::template_version);

    try {
        sufficiency.completion = sufficiency_future.get();
        auto const outcome = parse_sufficiency(sufficiency.completion);
        response.clarification_text = outcome.clarification_text;
    } catch (BackendError const & e) {
        sufficiency.note = fmt::format("sufficiency completion failed ({}): {}",
                                       to_string(e.kind()), e.what());
    }

    if (main_failure) {
        std::rethrow_exception(main_failure);
    }

    auto enforced = enforce_no_code(main.completion, *backends.rewrite,
                                    backends.rewrite_params, req.id + "/rewrite");
    response.main_text = std::move(enforced.text);
    response.code_was_removed = enforced.code_was_removed;
    response.fallback_strip_applied = enforced.fallback_strip_applied;

    response.trace.push_back(std::move(sufficiency));
    response.trace.push_back(std::move(main));
    if (enforced.rewrite_trace) {
        response.trace.push_back(std::move(*enforced.rewrite_trace));
    }
    return response;
}

} // namespace tutorguard
