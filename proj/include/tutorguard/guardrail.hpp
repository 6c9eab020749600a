// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/llm_backend.hpp"
#include "tutorguard/markdown_fences.hpp"
#include "tutorguard/prompts.hpp"
#include "tutorguard/query_model.hpp"

#include <memory>
#include <optional>
#include <string>

namespace tutorguard {

struct SufficiencyOutcome
{
    enum class Kind
    {
        sufficient,
        needs_clarification,
    };

    Kind kind = Kind::sufficient;
    std::optional<std::string> clarification_text;
};

/// Sufficient iff the completion, with trailing whitespace and quote marks
/// removed, ends in "OK." (case-sensitive). A blank completion asks for
/// nothing and counts as sufficient.
SufficiencyOutcome parse_sufficiency(std::string_view completion);

/// Backends for the two roles: "chat" answers the sufficiency and main
/// prompts (with the class's params), "rewrite" performs code removal.
struct Backends
{
    std::shared_ptr<CompletionBackend> chat;
    std::shared_ptr<CompletionBackend> rewrite;
    CompletionParams rewrite_params;
};

struct EnforcedText
{
    std::string text;
    bool code_was_removed = false;
    bool fallback_strip_applied = false;
    std::optional<TraceEntry> rewrite_trace;
};

/// Returns text with no fenced code blocks. Asks the rewrite backend first
/// and strips mechanically whatever it leaves behind, or strips the
/// original if the rewrite call fails. Never throws BackendError.
EnforcedText enforce_no_code(std::string const & main_text, CompletionBackend & rewrite,
                             CompletionParams const & params,
                             std::string const & prompt_id = "rewrite");

/// Runs the sufficiency and main prompts concurrently, then enforces the
/// no-code rule on the main completion. Throws BackendError if the main
/// completion fails; a failed sufficiency completion only leaves a note in
/// the trace.
AssistanceResponse respond(HelpRequest const & req, ClassContext const & ctx,
                           Backends const & backends);

} // namespace tutorguard
