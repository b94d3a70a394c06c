#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "peek2/errors.hpp"

namespace peek2::utf8 {

struct Decoded {
    char32_t scalar;
    std::uint32_t length;  // bytes, 1..4
};

namespace detail {
inline bool is_cont(unsigned char b) noexcept { return (b & 0xC0) == 0x80; }
}  // namespace detail

/// Decodes the scalar starting at `pos` (must be < text.size()). Rejects
/// overlong forms, surrogates, values above U+10FFFF and truncated sequences.
inline Decoded decode(std::string_view text, std::size_t pos) {
    const auto* p = reinterpret_cast<const unsigned char*>(text.data()) + pos;
    const std::size_t avail = text.size() - pos;
    const unsigned char b0 = p[0];
    if (b0 < 0x80) return {b0, 1};
    if (b0 < 0xC2) throw InvalidUtf8(pos);
    if (b0 < 0xE0) {
        if (avail < 2 || !detail::is_cont(p[1])) throw InvalidUtf8(pos);
        return {static_cast<char32_t>(((b0 & 0x1F) << 6) | (p[1] & 0x3F)), 2};
    }
    if (b0 < 0xF0) {
        if (avail < 3 || !detail::is_cont(p[1]) || !detail::is_cont(p[2])) throw InvalidUtf8(pos);
        const char32_t c = ((b0 & 0x0F) << 12) | ((p[1] & 0x3F) << 6) | (p[2] & 0x3F);
        if (c < 0x800 || (c >= 0xD800 && c <= 0xDFFF)) throw InvalidUtf8(pos);
        return {c, 3};
    }
    if (b0 < 0xF5) {
        if (avail < 4 || !detail::is_cont(p[1]) || !detail::is_cont(p[2]) ||
            !detail::is_cont(p[3]))
            throw InvalidUtf8(pos);
        const char32_t c = ((b0 & 0x07) << 18) | ((p[1] & 0x3F) << 12) | ((p[2] & 0x3F) << 6) |
                           (p[3] & 0x3F);
        if (c < 0x10000 || c > 0x10FFFF) throw InvalidUtf8(pos);
        return {c, 4};
    }
    throw InvalidUtf8(pos);
}

/// Throws InvalidUtf8 at the first malformed sequence.
void validate(std::string_view text);

bool is_valid(std::string_view text) noexcept;

void append(std::string& out, char32_t scalar);

std::string encode(const std::u32string& scalars);

std::u32string decode_all(std::string_view text);

/// Byte offsets of every scalar start, plus text.size() at the end.
std::vector<std::size_t> scalar_boundaries(std::string_view text);

}  // namespace peek2::utf8
