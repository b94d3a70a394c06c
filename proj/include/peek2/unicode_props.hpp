#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace peek2 {

/// Inclusive range of Unicode scalar values.
struct ScalarRange {
    char32_t first;
    char32_t last;

    friend bool operator==(const ScalarRange&, const ScalarRange&) = default;
};

/// A scalar whose simple case folding is one of the contraction letters
/// (s, d, m, t, l, v, r, e).
struct FoldEntry {
    char32_t scalar;
    char32_t folded;

    friend bool operator==(const FoldEntry&, const FoldEntry&) = default;
};

enum class ScalarClass : std::uint8_t { other, letter, number, whitespace };

/// Views over the compiled property tables. Ranges are sorted and fully
/// coalesced; fold entries are sorted by scalar.
struct ScalarClassTables {
    std::span<const ScalarRange> letter_ranges;      // Lu Ll Lt Lm Lo
    std::span<const ScalarRange> number_ranges;      // Nd Nl No
    std::span<const ScalarRange> whitespace_ranges;  // White_Space
    std::span<const FoldEntry> contraction_folds;
    std::string_view unicode_version;
};

const ScalarClassTables& scalar_class_tables() noexcept;

std::string_view unicode_version() noexcept;

/// Letter, Number and White_Space are mutually exclusive, so one lookup
/// answers all three predicates.
ScalarClass scalar_class(char32_t scalar) noexcept;

inline bool is_letter(char32_t scalar) noexcept {
    return scalar_class(scalar) == ScalarClass::letter;
}
inline bool is_number(char32_t scalar) noexcept {
    return scalar_class(scalar) == ScalarClass::number;
}
inline bool is_whitespace(char32_t scalar) noexcept {
    return scalar_class(scalar) == ScalarClass::whitespace;
}

/// Returns the lowercase ASCII contraction letter `scalar` case-folds to,
/// or 0 when it folds to none of them. U+017F folds to 's'.
char32_t contraction_fold(char32_t scalar) noexcept;

inline bool is_scalar_value(char32_t c) noexcept {
    return c < 0x110000 && (c < 0xD800 || c > 0xDFFF);
}

}  // namespace peek2
