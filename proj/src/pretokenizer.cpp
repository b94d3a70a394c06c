#include "peek2/pretokenizer.hpp"

#include "peek2/unicode_props.hpp"

namespace peek2 {
namespace {

using utf8::Decoded;

constexpr char32_t kSpace = U' ';
constexpr char32_t kQuote = U'\'';

inline bool is_line_fold(char32_t c) noexcept { return c == U'\r' || c == U'\n'; }

class Reader {
public:
    Reader(std::string_view text, ReadStats* stats) noexcept : text_(text), stats_(stats) {}

    Decoded at(std::size_t pos) const {
        if (stats_ != nullptr) ++stats_->scalar_reads;
        return utf8::decode(text_, pos);
    }
    std::size_t size() const noexcept { return text_.size(); }

private:
    std::string_view text_;
    ReadStats* stats_;
};

// Each routine receives the already decoded scalar at `cursor` and returns
// the end offset of the segment.

std::size_t word_end(const Reader& r, std::size_t cursor, Decoded first) {
    std::size_t pos = cursor + first.length;
    const auto cls = scalar_class(first.scalar);
    if (cls != ScalarClass::letter &&
        (cls == ScalarClass::number || is_line_fold(first.scalar))) {
        return pos;  // not a valid snap scalar; outside the table's precondition
    }
    while (pos < r.size()) {
        const auto d = r.at(pos);
        if (!is_letter(d.scalar)) break;
        pos += d.length;
    }
    return pos;
}

bool is_one_letter_contraction(char32_t folded) noexcept {
    return folded == U's' || folded == U'd' || folded == U'm' || folded == U't';
}

bool is_two_letter_contraction(char32_t a, char32_t b) noexcept {
    return (a == U'l' && b == U'l') || (a == U'v' && b == U'e') || (a == U'r' && b == U'e');
}

std::size_t contraction_end(const Reader& r, std::size_t cursor, Decoded first) {
    if (first.scalar != kQuote) return word_end(r, cursor, first);
    const std::size_t p1 = cursor + first.length;
    if (p1 < r.size()) {
        const auto d1 = r.at(p1);
        const char32_t f1 = contraction_fold(d1.scalar);
        if (is_one_letter_contraction(f1)) return p1 + d1.length;
        const std::size_t p2 = p1 + d1.length;
        if (f1 != 0 && p2 < r.size()) {
            const auto d2 = r.at(p2);
            if (is_two_letter_contraction(f1, contraction_fold(d2.scalar))) {
                return p2 + d2.length;
            }
        }
    }
    // Late fallback: the quote becomes the word's snapped scalar.
    return word_end(r, cursor, first);
}

std::size_t number_end(const Reader& r, std::size_t cursor, Decoded first) {
    std::size_t pos = cursor + first.length;
    if (!is_number(first.scalar)) return pos;
    for (int taken = 1; taken < 3 && pos < r.size(); ++taken) {
        const auto d = r.at(pos);
        if (!is_number(d.scalar)) break;
        pos += d.length;
    }
    return pos;
}

std::size_t punct_end(const Reader& r, std::size_t cursor, Decoded first) {
    std::size_t pos = cursor;
    Decoded d = first;
    if (first.scalar == kSpace) {
        pos += 1;
        if (pos >= r.size()) return pos;
        d = r.at(pos);
    }
    const std::size_t run_start = pos;
    while (scalar_class(d.scalar) == ScalarClass::other) {
        pos += d.length;
        if (pos >= r.size()) return pos;
        d = r.at(pos);
    }
    if (pos == run_start) return cursor + first.length;
    while (is_line_fold(d.scalar)) {
        pos += 1;
        if (pos >= r.size()) break;
        d = r.at(pos);
    }
    return pos;
}

std::size_t whitespace_end(const Reader& r, std::size_t cursor, Decoded first) {
    if (!is_whitespace(first.scalar)) return cursor + first.length;
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t pos = cursor;
    std::size_t last_start = cursor;
    std::size_t after_last_fold = kNone;
    std::size_t count = 0;
    Decoded d = first;
    for (;;) {
        last_start = pos;
        pos += d.length;
        ++count;
        if (is_line_fold(d.scalar)) after_last_fold = pos;
        if (pos >= r.size()) return pos;  // run reaches end of input: take all of it
        d = r.at(pos);
        if (!is_whitespace(d.scalar)) break;
    }
    if (after_last_fold != kNone) return after_last_fold;
    if (count >= 2) return last_start;  // leave the last one for the next word to snap
    return pos;
}

std::size_t dispatch(Branch branch, const Reader& r, std::size_t cursor, Decoded first) {
    switch (branch) {
        case Branch::contraction: return contraction_end(r, cursor, first);
        case Branch::word: return word_end(r, cursor, first);
        case Branch::number: return number_end(r, cursor, first);
        case Branch::punctuation: return punct_end(r, cursor, first);
        case Branch::whitespace: return whitespace_end(r, cursor, first);
    }
    return cursor + first.length;
}

Segment run_at(Branch branch, std::string_view text, std::size_t cursor) {
    const Reader r(text, nullptr);
    return {cursor, dispatch(branch, r, cursor, r.at(cursor))};
}

}  // namespace

Category peek_categorize(char32_t scalar) noexcept {
    if (scalar == kSpace) return Category::space;
    if (scalar == kQuote) return Category::quote;
    if (is_line_fold(scalar)) return Category::line_fold;
    switch (scalar_class(scalar)) {
        case ScalarClass::letter: return Category::letter;
        case ScalarClass::whitespace: return Category::whitespace;
        case ScalarClass::number: return Category::number;
        case ScalarClass::other: break;
    }
    return Category::other;
}

Segment branch0_contraction(std::string_view text, std::size_t cursor) {
    return run_at(Branch::contraction, text, cursor);
}
Segment branch1_word(std::string_view text, std::size_t cursor) {
    return run_at(Branch::word, text, cursor);
}
Segment branch2_number(std::string_view text, std::size_t cursor) {
    return run_at(Branch::number, text, cursor);
}
Segment branch3_punct(std::string_view text, std::size_t cursor) {
    return run_at(Branch::punctuation, text, cursor);
}
Segment branch4_whitespace(std::string_view text, std::size_t cursor) {
    return run_at(Branch::whitespace, text, cursor);
}
Segment run_branch(Branch branch, std::string_view text, std::size_t cursor) {
    return run_at(branch, text, cursor);
}

std::optional<Segment> Pretokenizer::next() {
    if (cursor_ >= text_.size()) return std::nullopt;
    const Reader r(text_, stats_);
    const auto first = r.at(cursor_);
    const std::size_t second_pos = cursor_ + first.length;
    const Category cat0 = peek_categorize(first.scalar);
    const Category cat1 =
        second_pos < text_.size() ? peek_categorize(r.at(second_pos).scalar) : Category::eos;
    const std::size_t end = dispatch(table_.lookup(cat0, cat1), r, cursor_, first);
    const Segment seg{cursor_, end};
    cursor_ = end;
    return seg;
}

std::vector<Segment> pretokenize(std::string_view text, const DecisionTable& table) {
    std::vector<Segment> out;
    out.reserve(text.size() / 4 + 1);
    Pretokenizer splitter(text, table);
    while (auto seg = splitter.next()) out.push_back(*seg);
    return out;
}

std::vector<std::string_view> pretokenize_strings(std::string_view text) {
    std::vector<std::string_view> out;
    Pretokenizer splitter(text);
    for (const auto& seg : splitter) out.push_back(text.substr(seg.start, seg.size()));
    return out;
}

std::vector<std::size_t> boundaries(const std::vector<Segment>& segments) {
    std::vector<std::size_t> out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.push_back(s.end);
    return out;
}

}  // namespace peek2
