// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tutorguard/query_model.hpp"

#include <map>
#include <string>
#include <string_view>

namespace tutorguard::prompts {

/// Recorded in every response trace.
inline constexpr std::string_view template_version = "tutorguard-prompts/1";

/// Raw templates. Slots are written {{name}}.
///   sufficiency: {{input_descriptions}} {{inputs}}
///   main:        {{input_descriptions}} {{inputs}} {{avoid_instructions}}
///   removal:     {{original}}
extern std::string_view const sufficiency_template;
extern std::string_view const main_template;
extern std::string_view const removal_template;

/// Description of the four delimited inputs, shared by the first two prompts.
extern std::string_view const input_descriptions;

/// Fills {{name}} slots. Throws std::invalid_argument for a slot with no
/// value; unused values are ignored.
std::string render(std::string_view tpl, std::map<std::string, std::string> const & slots);

/// <language>..</language> <code>..</code> <error>..</error> <issue>..</issue>,
/// one per line, bodies verbatim.
std::string delimited_inputs(HelpRequest const & req);

/// One "Do not discuss or use <topic> in your response." per topic,
/// space separated. Empty for an empty avoid set.
std::string avoid_instructions(std::vector<std::string> const & avoid_set);

std::string build_sufficiency_prompt(HelpRequest const & req, ClassContext const & ctx);
std::string build_main_prompt(HelpRequest const & req, ClassContext const & ctx);
std::string build_removal_prompt(std::string_view original);

} // namespace tutorguard::prompts
