#pragma once

#include <string>
#include <string_view>

namespace peek2 {

// One segment per output line: backslash, CR, LF and TAB are written as
// \\, \r, \n and \t. Every other byte passes through unchanged.
std::string escape_segment(std::string_view text);

/// Inverse of escape_segment. Throws ParseError on an unknown or dangling
/// escape.
std::string unescape_segment(std::string_view line);

}  // namespace peek2
