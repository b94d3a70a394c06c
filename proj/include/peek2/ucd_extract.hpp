#pragma once

// Extraction of the scalar property tables, either from the Unicode
// Character Database text files or from the ICU build the regex oracle runs
// on. Used by the table generator and by the regeneration test.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "peek2/unicode_props.hpp"

namespace peek2::ucd {

struct ExtractedTables {
    std::vector<ScalarRange> letters;
    std::vector<ScalarRange> numbers;
    std::vector<ScalarRange> whitespace;
    std::vector<FoldEntry> folds;
    std::string unicode_version;
    std::string source;  // e.g. "ucd" or "icu-70.1"
};

/// Sorts and merges overlapping or adjacent ranges.
std::vector<ScalarRange> coalesce(std::vector<ScalarRange> ranges);

/// Parses UnicodeData.txt (general category, simple case mappings) and
/// PropList.txt (White_Space). Throws ParseError on malformed lines.
ExtractedTables extract_from_ucd(std::istream& unicode_data, std::istream& prop_list,
                                 std::string unicode_version);

/// Walks every scalar through ICU's property API.
ExtractedTables extract_from_icu();

/// Unicode version reported by the linked ICU, "major.minor".
std::string icu_unicode_version();

std::string render_source(const ExtractedTables& tables);
std::string render_manifest(const ExtractedTables& tables, std::string_view source_text);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace peek2::ucd
