// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tutorguard::utf8 {

// Decodes UTF-8 into code points. Returns nullopt on malformed input
// (overlongs, surrogates, truncated sequences, values above U+10FFFF).
std::optional<std::u32string> decode(std::string_view bytes);

// Decodes, substituting U+FFFD for each malformed byte.
std::u32string decode_lossy(std::string_view bytes);

bool is_valid(std::string_view bytes);

// Number of code points; malformed bytes count as one each.
std::size_t length(std::string_view bytes);

std::string encode(std::u32string_view text);

} // namespace tutorguard::utf8
