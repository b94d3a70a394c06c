#pragma once

// Conformance harness: runs the Peek2 splitter and the regex oracle over the
// same inputs and compares segment boundaries byte for byte.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peek2/pretokenizer.hpp"

namespace peek2::diff {

struct Mismatch {
    std::size_t index = 0;  // document or fuzz case number
    std::string excerpt;    // input around the first divergence
    std::size_t first_divergent_offset = 0;
    std::vector<std::size_t> peek2_boundaries;
    std::vector<std::size_t> oracle_boundaries;
    std::string reproducer;  // minimized input that still mismatches
};

struct InvalidDocument {
    std::size_t index = 0;
    std::size_t byte_offset = 0;
};

struct DiffReport {
    std::uint64_t inputs_tested = 0;
    std::uint64_t scalars_tested = 0;
    std::vector<Mismatch> mismatches;  // sorted by index
    std::vector<InvalidDocument> invalid_documents;
    std::optional<std::uint64_t> seed;

    bool ok() const noexcept { return mismatches.empty(); }
};

struct DiffOptions {
    DecisionTable table = DecisionTable::standard();
    unsigned threads = 1;
    bool shrink = true;
};

/// Alphabet buckets a fuzz case draws scalars from.
enum class Bucket : std::size_t {
    other = 0,
    space,
    quote,
    line_fold,
    letter,
    whitespace,
    number,
    boundary,  // edge scalars: U+2019, U+017F, U+212A, U+2028, combining marks, ...
};
inline constexpr std::size_t kBucketCount = 8;

struct FuzzConfig {
    std::uint64_t seed = 0;
    std::size_t case_count = 100000;
    std::size_t max_len = 64;  // scalars per case
    std::array<double, kBucketCount> category_weights{1, 1, 1, 1, 1, 1, 1, 1};

    /// Throws std::invalid_argument when weights are negative or all zero,
    /// or max_len is 0.
    void validate() const;
};

/// First offset where the two boundary lists disagree, if any.
std::optional<std::size_t> first_divergence(const std::vector<std::size_t>& a,
                                            const std::vector<std::size_t>& b);

/// Scalar-range bisection: repeatedly drops chunks of scalars while
/// `still_fails` holds, halving the chunk size down to single scalars.
std::string shrink(std::string_view input, const std::function<bool(std::string_view)>& still_fails);

DiffReport diff_corpus(const std::vector<std::string>& documents, const DiffOptions& options = {});

/// Case `index` of the stream defined by config.seed. Pure function.
std::string generate_case(const FuzzConfig& config, std::uint64_t index);

DiffReport fuzz(const FuzzConfig& config, const DiffOptions& options = {});

/// One document per line, "\n" separated. A trailing empty line is dropped.
std::vector<std::string> read_corpus(std::istream& in);

/// One JSON object per mismatch, then a {"summary": ...} footer line.
void write_report(std::ostream& out, const DiffReport& report);

}  // namespace peek2::diff
