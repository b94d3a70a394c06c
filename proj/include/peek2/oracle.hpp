#pragma once

// Reference splitter: the cl100k pattern run by a Unicode-aware backtracking
// regex engine (ICU). Slow on purpose; it defines correct segmentation.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peek2/pretokenizer.hpp"

namespace peek2::oracle {

/// The pattern, verbatim. ICU supports possessive quantifiers, \p{..},
/// negative lookahead and `$`, so no rewrite is needed.
inline constexpr std::string_view kPattern =
    R"('(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s)";

/// The variant shipped by tiktoken and most tokenizer files: no possessive
/// quantifiers, "\s*[\r\n]+" and "\s+" instead of "\s++$", "\s*[\r\n]" and
/// "\s". Only used to flag inputs where the two dialects split differently.
inline constexpr std::string_view kDeployedPattern =
    R"((?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\r\n\p{L}\p{N}]?\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]+[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+)";

/// e.g. "ICU 70.1".
std::string engine_name();

/// Unicode version of the engine's property data.
std::string unicode_version();

/// Owns a matcher; reuse one per thread for repeated splitting.
class OracleSplitter {
public:
    OracleSplitter();
    /// Splits with another pattern instead of kPattern. Throws
    /// std::runtime_error if it does not compile.
    explicit OracleSplitter(std::string_view pattern);
    ~OracleSplitter();
    OracleSplitter(OracleSplitter&&) noexcept;
    OracleSplitter& operator=(OracleSplitter&&) noexcept;

    /// Leftmost-first repeated matching from offset 0. Throws InvalidUtf8,
    /// or OracleGap if some position is not covered by a match.
    std::vector<Segment> split(std::string_view text);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience over a thread-local OracleSplitter.
std::vector<Segment> oracle_split(std::string_view text);

/// Indices of documents that kPattern and kDeployedPattern split
/// differently. Invalid documents are skipped.
std::vector<std::size_t> dialect_disagreements(const std::vector<std::string>& documents);

/// Top-level alternatives of kPattern, in order.
std::vector<std::string> pattern_alternatives(std::string_view pattern = kPattern);

/// Which branch routine an alternative of kPattern corresponds to. The four
/// whitespace alternatives all map to Branch::whitespace.
Branch branch_of_alternative(std::size_t index);

struct AlternativeMatch {
    std::size_t alternative;
    std::size_t end;  // byte offset
};

/// Tries each alternative anchored at offset 0, in pattern order, and
/// reports the first that matches. This is what leftmost-first alternation
/// selects for the first segment.
std::optional<AlternativeMatch> first_alternative(std::string_view text);

}  // namespace peek2::oracle
