#include "peek2/utf8.hpp"

namespace peek2::utf8 {

void validate(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (static_cast<unsigned char>(text[pos]) < 0x80) {
            ++pos;
            continue;
        }
        pos += decode(text, pos).length;
    }
}

bool is_valid(std::string_view text) noexcept {
    try {
        validate(text);
        return true;
    } catch (const InvalidUtf8&) {
        return false;
    }
}

void append(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string encode(const std::u32string& scalars) {
    std::string out;
    out.reserve(scalars.size());
    for (char32_t c : scalars) append(out, c);
    return out;
}

std::u32string decode_all(std::string_view text) {
    std::u32string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto d = decode(text, pos);
        out.push_back(d.scalar);
        pos += d.length;
    }
    return out;
}

std::vector<std::size_t> scalar_boundaries(std::string_view text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        out.push_back(pos);
        pos += decode(text, pos).length;
    }
    out.push_back(text.size());
    return out;
}

}  // namespace peek2::utf8
