#include "peek2/ucd_extract.hpp"

#include <unicode/uchar.h>
#include <unicode/uversion.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "peek2/errors.hpp"

namespace peek2::ucd {
namespace {

constexpr std::string_view kContractionLetters = "sdmtlvre";

bool is_contraction_letter(char32_t c) {
    return c < 0x80 && kContractionLetters.find(static_cast<char>(c)) != std::string_view::npos;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

char32_t parse_hex(std::string_view text, std::size_t line_no) {
    text = trim(text);
    std::uint32_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size() || value > 0x10FFFF) {
        throw ParseError("line " + std::to_string(line_no) + ": bad code point '" +
                         std::string(text) + "'");
    }
    return value;
}

void append_range(std::vector<ScalarRange>& out, char32_t first, char32_t last) {
    // Surrogates are not scalars; they never carry these properties anyway.
    if (first <= 0xDFFF && last >= 0xD800) {
        if (first < 0xD800) out.push_back({first, 0xD7FF});
        if (last > 0xDFFF) out.push_back({0xE000, last});
        return;
    }
    out.push_back({first, last});
}

std::string hex(char32_t c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%04X", static_cast<unsigned>(c));
    return buf;
}

void render_ranges(std::ostringstream& os, std::string_view name,
                   const std::vector<ScalarRange>& ranges) {
    os << "inline constexpr ScalarRange " << name << "[] = {\n";
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (i % 4 == 0) os << "   ";
        os << " {" << hex(ranges[i].first) << ", " << hex(ranges[i].last) << "},";
        if (i % 4 == 3 || i + 1 == ranges.size()) os << "\n";
    }
    os << "};\n\n";
}

}  // namespace

std::vector<ScalarRange> coalesce(std::vector<ScalarRange> ranges) {
    std::sort(ranges.begin(), ranges.end(),
              [](const ScalarRange& a, const ScalarRange& b) { return a.first < b.first; });
    std::vector<ScalarRange> out;
    for (const auto& r : ranges) {
        if (!out.empty() && r.first <= out.back().last + 1) {
            out.back().last = std::max(out.back().last, r.last);
        } else {
            out.push_back(r);
        }
    }
    return out;
}

ExtractedTables extract_from_ucd(std::istream& unicode_data, std::istream& prop_list,
                                 std::string unicode_version) {
    ExtractedTables tables;
    tables.unicode_version = std::move(unicode_version);
    tables.source = "ucd";

    std::vector<ScalarRange> letters;
    std::vector<ScalarRange> numbers;
    std::unordered_map<char32_t, char32_t> lower;
    std::unordered_map<char32_t, char32_t> upper;
    std::vector<char32_t> cased;

    std::string line;
    std::size_t line_no = 0;
    std::optional<char32_t> pending_first;
    std::string pending_category;
    while (std::getline(unicode_data, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line, ';');
        if (fields.size() != 15) {
            throw ParseError("UnicodeData.txt line " + std::to_string(line_no) +
                             ": expected 15 fields, got " + std::to_string(fields.size()));
        }
        const char32_t cp = parse_hex(fields[0], line_no);
        const std::string_view name = fields[1];
        const std::string category(trim(fields[2]));
        if (category.size() != 2) {
            throw ParseError("UnicodeData.txt line " + std::to_string(line_no) +
                             ": bad general category");
        }

        char32_t first = cp;
        if (name.ends_with(", First>")) {
            pending_first = cp;
            pending_category = category;
            continue;
        }
        if (name.ends_with(", Last>")) {
            if (!pending_first || pending_category != category) {
                throw ParseError("UnicodeData.txt line " + std::to_string(line_no) +
                                 ": range end without matching start");
            }
            first = *pending_first;
            pending_first.reset();
        }

        if (category[0] == 'L' && category != "LC") append_range(letters, first, cp);
        if (category == "Nd" || category == "Nl" || category == "No")
            append_range(numbers, first, cp);

        if (!trim(fields[12]).empty()) upper[cp] = parse_hex(fields[12], line_no);
        if (!trim(fields[13]).empty()) lower[cp] = parse_hex(fields[13], line_no);
        if (first == cp) cased.push_back(cp);
    }
    if (pending_first) throw ParseError("UnicodeData.txt: unterminated First/Last range");

    std::vector<ScalarRange> whitespace;
    line_no = 0;
    while (std::getline(prop_list, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto fields = split_fields(body, ';');
        if (fields.size() != 2) {
            throw ParseError("PropList.txt line " + std::to_string(line_no) +
                             ": expected 'range ; property'");
        }
        if (trim(fields[1]) != "White_Space") continue;
        const auto range_text = trim(fields[0]);
        if (const auto dots = range_text.find(".."); dots != std::string_view::npos) {
            append_range(whitespace, parse_hex(range_text.substr(0, dots), line_no),
                         parse_hex(range_text.substr(dots + 2), line_no));
        } else {
            const char32_t cp = parse_hex(range_text, line_no);
            append_range(whitespace, cp, cp);
        }
    }

    const auto map_or_self = [](const auto& map, char32_t c) {
        const auto it = map.find(c);
        return it == map.end() ? c : it->second;
    };
    // Simple case folding restricted to the target letters: lowercase, or for
    // characters that are their own lowercase (U+017F), lowercase of uppercase.
    std::sort(cased.begin(), cased.end());
    for (char32_t c : cased) {
        char32_t folded = map_or_self(lower, c);
        if (folded == c) folded = map_or_self(lower, map_or_self(upper, c));
        if (is_contraction_letter(folded)) tables.folds.push_back({c, folded});
    }

    tables.letters = coalesce(std::move(letters));
    tables.numbers = coalesce(std::move(numbers));
    tables.whitespace = coalesce(std::move(whitespace));
    return tables;
}

std::string icu_unicode_version() {
    UVersionInfo info;
    u_getUnicodeVersion(info);
    return std::to_string(info[0]) + "." + std::to_string(info[1]);
}

ExtractedTables extract_from_icu() {
    ExtractedTables tables;
    tables.unicode_version = icu_unicode_version();
    tables.source = std::string("icu-") + U_ICU_VERSION;

    std::vector<ScalarRange> letters;
    std::vector<ScalarRange> numbers;
    std::vector<ScalarRange> whitespace;
    for (char32_t c = 0; c < 0x110000; ++c) {
        if (c >= 0xD800 && c <= 0xDFFF) continue;
        const auto cp = static_cast<UChar32>(c);
        const auto mask = U_GET_GC_MASK(cp);
        if (mask & U_GC_L_MASK) letters.push_back({c, c});
        if (mask & U_GC_N_MASK) numbers.push_back({c, c});
        if (u_hasBinaryProperty(cp, UCHAR_WHITE_SPACE)) whitespace.push_back({c, c});
        const auto folded = static_cast<char32_t>(u_foldCase(cp, U_FOLD_CASE_DEFAULT));
        if (is_contraction_letter(folded)) tables.folds.push_back({c, folded});
    }
    tables.letters = coalesce(std::move(letters));
    tables.numbers = coalesce(std::move(numbers));
    tables.whitespace = coalesce(std::move(whitespace));
    return tables;
}

std::string render_source(const ExtractedTables& tables) {
    std::ostringstream os;
    os << "// Generated by gen_unicode_tables (source: " << tables.source
       << "). Do not edit.\n"
       << "// clang-format off\n\n"
       << "inline constexpr std::string_view kUnicodeVersion = \"" << tables.unicode_version
       << "\";\n\n";
    render_ranges(os, "kLetterRanges", tables.letters);
    render_ranges(os, "kNumberRanges", tables.numbers);
    render_ranges(os, "kWhitespaceRanges", tables.whitespace);
    os << "inline constexpr FoldEntry kContractionFolds[] = {\n";
    for (const auto& f : tables.folds) {
        os << "    {" << hex(f.scalar) << ", U'" << static_cast<char>(f.folded) << "'},\n";
    }
    os << "};\n";
    return os.str();
}

std::string render_manifest(const ExtractedTables& tables, std::string_view source_text) {
    std::ostringstream os;
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(source_text)));
    os << "unicode_version " << tables.unicode_version << "\n"
       << "source " << tables.source << "\n"
       << "letter_ranges " << tables.letters.size() << "\n"
       << "number_ranges " << tables.numbers.size() << "\n"
       << "whitespace_ranges " << tables.whitespace.size() << "\n"
       << "contraction_folds " << tables.folds.size() << "\n"
       << "fnv1a64 " << digest << "\n";
    return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace peek2::ucd
