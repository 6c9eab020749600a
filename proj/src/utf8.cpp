// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/utf8.hpp"

namespace tutorguard::utf8 {

namespace {

// Decodes one code point starting at bytes[i]. On success advances i and
// returns the value; on failure returns -1 and advances i by one byte.
long next(std::string_view bytes, std::size_t& i)
{
    auto const byte = [&](std::size_t k) {
        return static_cast<unsigned char>(bytes[k]);
    };
    unsigned char const lead = byte(i);
    if (lead < 0x80) {
        ++i;
        return lead;
    }

    int extra = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
        min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
        min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
        min = 0x10000;
    } else {
        ++i;
        return -1;
    }

    if (i + static_cast<std::size_t>(extra) >= bytes.size()) {
        ++i;
        return -1;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char const c = byte(i + k);
        if ((c & 0xC0) != 0x80) {
            ++i;
            return -1;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return -1;
    }
    i += static_cast<std::size_t>(extra) + 1;
    return static_cast<long>(cp);
}

} // namespace

std::optional<std::u32string> decode(std::string_view bytes)
{
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        long const cp = next(bytes, i);
        if (cp < 0) {
            return std::nullopt;
        }
        out.push_back(static_cast<char32_t>(cp));
    }
    return out;
}

std::u32string decode_lossy(std::string_view bytes)
{
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        long const cp = next(bytes, i);
        out.push_back(cp < 0 ? U'�' : static_cast<char32_t>(cp));
    }
    return out;
}

bool is_valid(std::string_view bytes)
{
    std::size_t i = 0;
    while (i < bytes.size()) {
        if (next(bytes, i) < 0) {
            return false;
        }
    }
    return true;
}

std::size_t length(std::string_view bytes)
{
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < bytes.size()) {
        next(bytes, i);
        ++n;
    }
    return n;
}

std::string encode(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

} // namespace tutorguard::utf8
