#pragma once

// Minimal byte-level BPE: encoder, trainer and vocab/merges file I/O.
//
// On-disk formats
//   vocab:  JSON object {"<token>": id, ...}. Tokens are written in the
//           byte-level visible-character convention (each byte mapped to a
//           printable code point, e.g. space -> U+0120 'Ġ').
//   merges: UTF-8 text, one "<left> <right>" pair per line in the same
//           convention; rank = order of appearance. A leading "#version"
//           line and blank lines are ignored.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "peek2/errors.hpp"
#include "peek2/pretokenizer.hpp"

namespace peek2::bpe {

using TokenId = std::uint32_t;

/// Which splitter produces the pretoken segments.
enum class Backend { peek2, oracle };

std::string_view backend_name(Backend backend) noexcept;

std::vector<Segment> split(Backend backend, std::string_view text);

class BpeModel {
public:
    /// The 256 single-byte tokens (id = byte value) and no merges.
    static BpeModel byte_level();

    /// Validates and indexes a model. `tokens[id]` holds raw token bytes.
    /// Throws InvalidModel.
    static BpeModel from_parts(std::vector<std::string> tokens,
                               std::vector<std::pair<std::string, std::string>> merges);

    std::size_t vocab_size() const noexcept { return tokens_.size(); }
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    std::optional<TokenId> id_of(std::string_view bytes) const;
    TokenId byte_token(std::uint8_t byte) const noexcept { return byte_ids_[byte]; }

    /// (left id, right id) in rank order.
    const std::vector<std::pair<TokenId, TokenId>>& merges() const noexcept { return merges_; }

    struct MergeRule {
        std::uint32_t rank;
        TokenId merged;
    };
    std::optional<MergeRule> merge_of(TokenId left, TokenId right) const;

    friend bool operator==(const BpeModel& a, const BpeModel& b) {
        return a.tokens_ == b.tokens_ && a.merges_ == b.merges_;
    }

private:
    static std::uint64_t pair_key(TokenId l, TokenId r) noexcept {
        return (static_cast<std::uint64_t>(l) << 32) | r;
    }

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
    std::vector<std::pair<TokenId, TokenId>> merges_;
    std::unordered_map<std::uint64_t, MergeRule> merge_index_;
    std::array<TokenId, 256> byte_ids_{};
};

struct Encoding {
    std::vector<TokenId> ids;
    std::vector<Segment> offsets;  // byte range of each token in the input
};

/// Thrown by encode_batch; `index` names the offending document.
class BatchError : public std::runtime_error {
public:
    BatchError(std::size_t index, const std::string& what)
        : std::runtime_error("document " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Pretokenizes, then merges within each segment: repeatedly apply the
/// lowest-rank merge present, leftmost occurrence first. Throws InvalidUtf8.
Encoding encode(const BpeModel& model, std::string_view text, Backend backend = Backend::peek2);

/// Tokens of a single pretoken, no splitting.
std::vector<TokenId> encode_segment(const BpeModel& model, std::string_view bytes);

/// Element-wise encode(); `threads` = 0 picks hardware concurrency.
std::vector<Encoding> encode_batch(const BpeModel& model, const std::vector<std::string>& documents,
                                   unsigned threads = 0, Backend backend = Backend::peek2);

std::string decode(const BpeModel& model, std::span<const TokenId> ids);

struct TrainConfig {
    std::size_t vocab_size = 256;
    std::uint64_t min_frequency = 2;
    unsigned threads = 1;
    Backend backend = Backend::peek2;
};

/// Most-frequent-pair training over the pretokenized corpus. Ties go to the
/// lexicographically smaller left token bytes, then right token bytes.
/// Throws std::invalid_argument for vocab_size < 256 or an empty corpus, and
/// InvalidUtf8 for malformed documents.
BpeModel train_bpe(const std::vector<std::string>& corpus, const TrainConfig& config);

// Byte-level visible-character mapping.
std::string bytes_to_visible(std::string_view bytes);
/// Throws ParseError for code points outside the mapping.
std::string visible_to_bytes(std::string_view visible);

/// Throws ParseError for unreadable input and InvalidModel for
/// inconsistent contents.
BpeModel load_model(std::istream& vocab_json, std::istream& merges_text);
BpeModel load_model(const std::filesystem::path& vocab_path,
                    const std::filesystem::path& merges_path);

void save_vocab(std::ostream& out, const BpeModel& model);
void save_merges(std::ostream& out, const BpeModel& model);
void save_model(const BpeModel& model, const std::filesystem::path& vocab_path,
                const std::filesystem::path& merges_path);

}  // namespace peek2::bpe
