#pragma once

// Regex-free cl100k-style pretokenizer.
//
// The next segment is decided by the categories of the next two scalars
// (DecisionTable), then one of five branch routines consumes it. The only
// decision that needs more than two scalars of context, a quote followed by
// a letter that turns out not to be a contraction, is handled inside the
// contraction routine by falling back to the word routine.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string_view>
#include <vector>

#include "peek2/utf8.hpp"

namespace peek2 {

enum class Category : std::uint8_t {
    other = 0,
    space = 1,      // U+0020
    quote = 2,      // U+0027
    line_fold = 3,  // CR or LF
    letter = 4,
    whitespace = 5,
    number = 6,
    eos = 7,  // only ever the second peek, past the end of input
};

inline constexpr std::size_t kScalarCategories = 7;

enum class Branch : std::uint8_t {
    contraction = 0,
    word = 1,
    number = 2,
    punctuation = 3,
    whitespace = 4,
};

/// Byte range [start, end) of one pretoken.
struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - start; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

Category peek_categorize(char32_t scalar) noexcept;

/// (first category, second category) -> branch. The second index also
/// accepts Category::eos.
class DecisionTable {
public:
    using Row = std::array<Branch, kScalarCategories + 1>;

    static constexpr DecisionTable standard() noexcept {
        constexpr auto P = Branch::punctuation;
        constexpr auto W = Branch::word;
        constexpr auto S = Branch::whitespace;
        constexpr auto N = Branch::number;
        constexpr auto C = Branch::contraction;
        DecisionTable t;
        //         0  1  2  3  4  5  6  eos
        t.cells_ = {{{P, P, P, P, W, P, P, P},
                     {P, S, P, S, W, S, S, S},
                     {P, P, P, P, C, P, P, P},
                     {S, S, S, S, S, S, S, S},
                     {W, W, W, W, W, W, W, W},
                     {S, S, S, S, W, S, S, S},
                     {N, N, N, N, N, N, N, N}}};
        return t;
    }

    constexpr Branch lookup(Category cat0, Category cat1) const noexcept {
        return cells_[static_cast<std::size_t>(cat0)][static_cast<std::size_t>(cat1)];
    }

    /// Copy with one cell replaced; used for mutation testing.
    constexpr DecisionTable with_cell(Category cat0, Category cat1, Branch b) const noexcept {
        DecisionTable t = *this;
        t.cells_[static_cast<std::size_t>(cat0)][static_cast<std::size_t>(cat1)] = b;
        return t;
    }

    friend constexpr bool operator==(const DecisionTable&, const DecisionTable&) = default;

private:
    std::array<Row, kScalarCategories> cells_{};
};

inline Branch decide_branch(Category cat0, Category cat1,
                            const DecisionTable& table = DecisionTable::standard()) noexcept {
    return table.lookup(cat0, cat1);
}

/// Counts scalar decodes; lets tests bound the work per input byte.
struct ReadStats {
    std::uint64_t scalar_reads = 0;
};

// Branch routines. `cursor` must be a scalar boundary strictly inside
// `text`. Each returns the segment starting at `cursor` and always consumes
// at least one scalar, even when called outside its table precondition.
Segment branch0_contraction(std::string_view text, std::size_t cursor);
Segment branch1_word(std::string_view text, std::size_t cursor);
Segment branch2_number(std::string_view text, std::size_t cursor);
Segment branch3_punct(std::string_view text, std::size_t cursor);
Segment branch4_whitespace(std::string_view text, std::size_t cursor);
Segment run_branch(Branch branch, std::string_view text, std::size_t cursor);

/// Streaming splitter: one forward pass, one segment per next() call.
/// Throws InvalidUtf8 when it reaches malformed input; segments already
/// produced stay valid.
class Pretokenizer {
public:
    explicit Pretokenizer(std::string_view text,
                          const DecisionTable& table = DecisionTable::standard(),
                          ReadStats* stats = nullptr) noexcept
        : text_(text), table_(table), stats_(stats) {}

    std::optional<Segment> next();

    std::size_t cursor() const noexcept { return cursor_; }

    class iterator {
    public:
        using value_type = Segment;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(Pretokenizer* owner) : owner_(owner) { ++*this; }

        const Segment& operator*() const { return *current_; }
        const Segment* operator->() const { return &*current_; }
        iterator& operator++() {
            current_ = owner_->next();
            return *this;
        }
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator& it, std::default_sentinel_t) {
            return !it.current_.has_value();
        }

    private:
        Pretokenizer* owner_ = nullptr;
        std::optional<Segment> current_;
    };

    iterator begin() { return iterator(this); }
    std::default_sentinel_t end() const noexcept { return {}; }

private:
    std::string_view text_;
    DecisionTable table_;
    ReadStats* stats_;
    std::size_t cursor_ = 0;
};

/// Whole-input segmentation as byte offsets.
std::vector<Segment> pretokenize(std::string_view text,
                                 const DecisionTable& table = DecisionTable::standard());

/// The substrings named by pretokenize(), in order.
std::vector<std::string_view> pretokenize_strings(std::string_view text);

/// Segment end offsets; the comparison key for conformance checks.
std::vector<std::size_t> boundaries(const std::vector<Segment>& segments);

}  // namespace peek2
