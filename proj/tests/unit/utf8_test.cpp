#include <doctest.h>

#include <random>

#include "peek2/errors.hpp"
#include "peek2/unicode_props.hpp"
#include "peek2/utf8.hpp"

using namespace peek2;

TEST_SUITE("utf8") {

TEST_CASE("decodes each length") {
    const std::string s = "aé中\U0001F600";
    const auto scalars = utf8::decode_all(s);
    CHECK(scalars == U"aé中\U0001F600");
    CHECK(utf8::scalar_boundaries(s) == std::vector<std::size_t>{0, 1, 3, 6, 10});
    CHECK(utf8::encode(scalars) == s);
}

TEST_CASE("rejects malformed sequences with the offending offset") {
    struct Bad {
        std::string text;
        std::size_t offset;
    };
    const Bad cases[] = {
        {"ab\x80", 2},              // stray continuation
        {"\xC0\xAF", 0},            // overlong
        {"x\xE0\x80\xAF", 1},       // overlong 3-byte
        {"\xED\xA0\x80", 0},        // surrogate
        {"\xF4\x90\x80\x80", 0},    // above U+10FFFF
        {"ok\xE4\xB8", 2},          // truncated
        {"\xFF", 0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.offset);
        CHECK_FALSE(utf8::is_valid(c.text));
        try {
            utf8::validate(c.text);
            FAIL("expected InvalidUtf8");
        } catch (const InvalidUtf8& e) {
            CHECK(e.offset() == c.offset);
        }
    }
}

TEST_CASE("encode/decode round trip over random scalars") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint32_t> dist(0, 0x10FFFF);
    for (int round = 0; round < 200; ++round) {
        std::u32string scalars;
        while (scalars.size() < 50) {
            const auto c = static_cast<char32_t>(dist(rng));
            if (is_scalar_value(c)) scalars.push_back(c);
        }
        const auto bytes = utf8::encode(scalars);
        CHECK(utf8::is_valid(bytes));
        CHECK(utf8::decode_all(bytes) == scalars);
    }
}

}  // TEST_SUITE
