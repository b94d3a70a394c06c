#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "peek2/errors.hpp"
#include "peek2/pretokenizer.hpp"
#include "peek2/unicode_props.hpp"

using namespace peek2;

namespace {

using Strings = std::vector<std::string_view>;

std::string_view first_segment(Segment (*branch)(std::string_view, std::size_t),
                               std::string_view text, std::size_t cursor = 0) {
    const auto seg = branch(text, cursor);
    return text.substr(seg.start, seg.size());
}

// Random UTF-8 text drawn from a small alphabet that covers every category.
std::string random_text(std::mt19937_64& rng, std::size_t scalars) {
    static const std::u32string alphabet =
        U" '\r\n\tabcsdmtlvreLLVEé中ſ7٣½!?.’\u00A0\u3000\u2028\u0301"
        U"\U0001F600";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::u32string out;
    for (std::size_t i = 0; i < scalars; ++i) out.push_back(alphabet[pick(rng)]);
    return utf8::encode(out);
}

void check_tiling(std::string_view text, const std::vector<Segment>& segs) {
    std::size_t expect = 0;
    for (const auto& s : segs) {
        REQUIRE(s.start == expect);
        REQUIRE(s.end > s.start);
        expect = s.end;
    }
    REQUIRE(expect == text.size());
    const auto starts = utf8::scalar_boundaries(text);
    for (const auto& s : segs)
        REQUIRE(std::binary_search(starts.begin(), starts.end(), s.end));
}

}  // namespace

TEST_SUITE("pretokenizer") {

TEST_CASE("peek_categorize") {
    CHECK(peek_categorize(U' ') == Category::space);
    CHECK(peek_categorize(U'\n') == Category::line_fold);
    CHECK(peek_categorize(U'\r') == Category::line_fold);
    CHECK(peek_categorize(U'\'') == Category::quote);
    CHECK(peek_categorize(U'’') == Category::other);
    CHECK(peek_categorize(U'x') == Category::letter);
    CHECK(peek_categorize(U'\t') == Category::whitespace);
    CHECK(peek_categorize(U'\u00A0') == Category::whitespace);
    CHECK(peek_categorize(U'9') == Category::number);
    CHECK(peek_categorize(U'!') == Category::other);
}

TEST_CASE("peek_categorize never yields the end-of-input sentinel") {
    for (char32_t c = 0; c < 0x110000; ++c) {
        if (!is_scalar_value(c)) continue;
        if (peek_categorize(c) == Category::eos) FAIL("scalar categorized as eos");
    }
}

TEST_CASE("decide_branch") {
    CHECK(decide_branch(Category::quote, Category::letter) == Branch::contraction);
    CHECK(decide_branch(Category::space, Category::letter) == Branch::word);
    CHECK(decide_branch(Category::number, Category::eos) == Branch::number);
}

TEST_CASE("table shape") {
    constexpr auto t = DecisionTable::standard();
    const Category all[] = {Category::other,  Category::space,      Category::quote,
                            Category::line_fold, Category::letter, Category::whitespace,
                            Category::number, Category::eos};
    for (auto c1 : all) {
        CHECK(t.lookup(Category::letter, c1) == Branch::word);
        CHECK(t.lookup(Category::number, c1) == Branch::number);
        CHECK(t.lookup(Category::line_fold, c1) == Branch::whitespace);
    }
    const Branch eos_column[] = {Branch::punctuation, Branch::whitespace, Branch::punctuation,
                                 Branch::whitespace,  Branch::word,       Branch::whitespace,
                                 Branch::number};
    for (std::size_t r = 0; r < kScalarCategories; ++r)
        CHECK(t.lookup(static_cast<Category>(r), Category::eos) == eos_column[r]);
    static_assert(DecisionTable::standard() == DecisionTable::standard());
    CHECK(t.with_cell(Category::other, Category::other, Branch::word) != t);
}

TEST_CASE("contraction branch") {
    CHECK(first_segment(branch0_contraction, "'Does it") == "'D");
    CHECK(first_segment(branch0_contraction, "'ll") == "'ll");
    CHECK(first_segment(branch0_contraction, "'quick") == "'quick");
    CHECK(first_segment(branch0_contraction, "'VE x") == "'VE");
    CHECK(first_segment(branch0_contraction, "'ſ") == "'ſ");
    CHECK(first_segment(branch0_contraction, "'lx") == "'lx");
    CHECK(first_segment(branch0_contraction, "'l") == "'l");
}

TEST_CASE("word branch") {
    const std::string_view lorem = "Lorem ipsum dolor";
    CHECK(first_segment(branch1_word, lorem, 5) == " ipsum");
    CHECK(first_segment(branch1_word, "a") == "a");
    CHECK(first_segment(branch1_word, "\tword ") == "\tword");
}

TEST_CASE("number branch") {
    CHECK(pretokenize_strings("12345678") == Strings{"123", "456", "78"});
    CHECK(first_segment(branch2_number, "5") == "5");
    CHECK(pretokenize_strings("١٢٣٤") ==
          Strings{"١٢٣", "٤"});
}

TEST_CASE("punctuation branch") {
    CHECK(first_segment(branch3_punct, "?’ She") == "?’");
    CHECK(first_segment(branch3_punct, ".") == ".");
    CHECK(first_segment(branch3_punct, "!!\r\n\nnext") == "!!\r\n\n");
    CHECK(first_segment(branch3_punct, " !x") == " !");
}

TEST_CASE("whitespace branch") {
    CHECK(first_segment(branch4_whitespace, "  \n  \nX") == "  \n  \n");
    CHECK(pretokenize_strings("   word") == Strings{"  ", " word"});
    CHECK(first_segment(branch4_whitespace, " 7") == " ");
    CHECK(first_segment(branch4_whitespace, " \t ") == " \t ");  // reaches end of input
    CHECK(pretokenize_strings("a\n  ") == Strings{"a", "\n  "});
}

TEST_CASE("branches consume at least one scalar outside their precondition") {
    const std::string_view inputs[] = {"x", "7", "'", " ", "\n", "\u00A0", "!", "中"};
    for (auto text : inputs) {
        for (int b = 0; b < 5; ++b) {
            const auto seg = run_branch(static_cast<Branch>(b), text, 0);
            CHECK(seg.start == 0);
            CHECK(seg.end >= 1);
            CHECK(seg.end <= text.size());
        }
    }
}

TEST_CASE("whole-input examples") {
    CHECK(pretokenize_strings("Lorem ipsum dolor sit amet.") ==
          Strings{"Lorem", " ipsum", " dolor", " sit", " amet", "."});
    CHECK(pretokenize_strings("").empty());
    CHECK(pretokenize("").empty());
    CHECK(pretokenize_strings("'Does it work?’ She asked.") ==
          Strings{"'D", "oes", " it", " work", "?’", " She", " asked", "."});
    CHECK(pretokenize_strings("a b") == Strings{"a", " b"});
}

TEST_CASE("offsets are byte offsets") {
    const auto segs = pretokenize("中文 ok");
    REQUIRE(segs.size() == 2);
    CHECK(segs[0] == Segment{0, 6});
    CHECK(segs[1] == Segment{6, 9});
    CHECK(boundaries(segs) == std::vector<std::size_t>{6, 9});
}

TEST_CASE("invalid UTF-8 is rejected") {
    CHECK_THROWS_AS(pretokenize("ok \xC3"), InvalidUtf8);
    Pretokenizer p("ab \xFF");
    CHECK(p.next() == Segment{0, 2});
    CHECK_THROWS_AS(p.next(), InvalidUtf8);
}

TEST_CASE("streaming iterator matches batch output") {
    const std::string text = "It's 2024: naïve café — 中文!\r\n  ok";
    std::vector<Segment> streamed;
    Pretokenizer p(text);
    for (const auto& s : p) streamed.push_back(s);
    CHECK(streamed == pretokenize(text));
}

TEST_CASE("property: segments tile random inputs") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto text = random_text(rng, 1 + i % 80);
        check_tiling(text, pretokenize(text));
    }
}

TEST_CASE("property: tiling holds under any table") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> cat0(0, 6), cat1(0, 7), branch(0, 4);
    for (int i = 0; i < 300; ++i) {
        auto table = DecisionTable::standard();
        for (int k = 0; k < 10; ++k) {
            table = table.with_cell(static_cast<Category>(cat0(rng)), static_cast<Category>(cat1(rng)),
                                    static_cast<Branch>(branch(rng)));
        }
        const auto text = random_text(rng, 60);
        check_tiling(text, pretokenize(text, table));
    }
}

TEST_CASE("property: single pass, bounded scalar reads") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto text = random_text(rng, 200);
        ReadStats stats;
        Pretokenizer p(text, DecisionTable::standard(), &stats);
        std::size_t count = 0;
        while (p.next()) ++count;
        const auto n = utf8::decode_all(text).size();
        CHECK(stats.scalar_reads <= 4 * n);
    }
    for (std::string text : {std::string(10000, '\''), std::string(10000, '7'),
                             std::string(10000, ' '), std::string(10000, '\n')}) {
        ReadStats stats;
        Pretokenizer p(text, DecisionTable::standard(), &stats);
        while (p.next()) {
        }
        CHECK(stats.scalar_reads <= 4 * text.size());
    }
}

TEST_CASE("property: deterministic across runs and threads") {
    std::mt19937_64 rng(4);
    std::vector<std::string> docs;
    for (int i = 0; i < 200; ++i) docs.push_back(random_text(rng, 120));
    std::vector<std::vector<Segment>> expected;
    for (const auto& d : docs) expected.push_back(pretokenize(d));

    std::vector<std::vector<std::vector<Segment>>> per_thread(4);
    std::vector<std::thread> workers;
    for (auto& out : per_thread) {
        workers.emplace_back([&docs, &out] {
            for (const auto& d : docs) out.push_back(pretokenize(d));
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& out : per_thread) CHECK(out == expected);
}

}  // TEST_SUITE
