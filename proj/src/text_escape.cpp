#include "peek2/text_escape.hpp"

#include "peek2/errors.hpp"

namespace peek2 {

std::string escape_segment(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\r': out += "\\r"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_segment(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] != '\\') {
            out += line[i];
            continue;
        }
        if (++i == line.size()) throw ParseError("dangling backslash at end of line");
        switch (line[i]) {
            case '\\': out += '\\'; break;
            case 'r': out += '\r'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default:
                throw ParseError(std::string("unknown escape \\") + line[i] + " at byte " +
                                 std::to_string(i - 1));
        }
    }
    return out;
}

}  // namespace peek2
