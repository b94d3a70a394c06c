#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "peek2/differential.hpp"
#include "peek2/errors.hpp"
#include "peek2/oracle.hpp"

using namespace peek2;
using namespace peek2::diff;

namespace {

std::vector<std::string> load_fixture(const char* name) {
    std::ifstream in(std::string(PEEK2_FIXTURES) + "/" + name, std::ios::binary);
    REQUIRE(in);
    return read_corpus(in);
}

bool disagree(std::string_view text, const DecisionTable& table) {
    return boundaries(pretokenize(text, table)) != boundaries(oracle::oracle_split(text));
}

// (2,4) sends "'q..." to the punctuation routine, which cannot produce the
// word-with-snapped-quote segment.
const auto kBroken = DecisionTable::standard().with_cell(Category::quote, Category::letter,
                                                         Branch::punctuation);

}  // namespace

TEST_SUITE("differential") {

TEST_CASE("fixture corpus has no mismatches") {
    const auto docs = load_fixture("corpus_multilingual.txt");
    REQUIRE(docs.size() > 1000);
    DiffOptions opts;
    opts.threads = 2;
    const auto report = diff_corpus(docs, opts);
    CHECK(report.ok());
    CHECK(report.inputs_tested == docs.size());
    CHECK(report.invalid_documents.empty());
    CHECK_FALSE(report.seed);
}

TEST_CASE("worked examples have no mismatches") {
    const auto docs = load_fixture("worked_examples.txt");
    REQUIRE(docs.size() == 3);
    CHECK(diff_corpus(docs).ok());
}

TEST_CASE("a flipped table cell is detected with a minimized reproducer") {
    DiffOptions opts;
    opts.table = kBroken;
    const auto report = diff_corpus({"fine", "it'quick one", "also fine"}, opts);
    REQUIRE(report.mismatches.size() == 1);
    const auto& m = report.mismatches[0];
    CHECK(m.index == 1);
    CHECK(m.first_divergent_offset == 3);
    CHECK(m.peek2_boundaries != m.oracle_boundaries);
    CHECK(disagree(m.reproducer, kBroken));
    CHECK(m.reproducer.size() <= 3);
}

TEST_CASE("invalid documents are recorded, not fatal") {
    const auto report = diff_corpus({"ok", "bad \xC3(", "ok"});
    CHECK(report.ok());
    REQUIRE(report.invalid_documents.size() == 1);
    CHECK(report.invalid_documents[0].index == 1);
    CHECK(report.invalid_documents[0].byte_offset == 4);
    CHECK(report.inputs_tested == 3);
}

TEST_CASE("first_divergence") {
    CHECK_FALSE(first_divergence({1, 3, 5}, {1, 3, 5}));
    CHECK(first_divergence({1, 3, 5}, {1, 4, 5}) == 3u);
    CHECK(first_divergence({1, 5}, {1, 3, 5}) == 3u);
}

TEST_CASE("shrink keeps the failure and never drops everything") {
    const auto shrunk = shrink("xxxxAxxxxBxxxx", [](std::string_view s) {
        return s.find('A') != std::string_view::npos && s.find('B') != std::string_view::npos;
    });
    CHECK(shrunk == "AB");
    const auto single = shrink("abc", [](std::string_view) { return true; });
    CHECK(single.size() == 1);
    const auto multibyte = shrink("中文中文X", [](std::string_view s) {
        return s.find('X') != std::string_view::npos;
    });
    CHECK(multibyte == "X");
}

TEST_CASE("property: shrinker output still mismatches") {
    FuzzConfig cfg;
    cfg.seed = 11;
    cfg.case_count = 400;
    DiffOptions opts;
    opts.table = kBroken;
    const auto report = fuzz(cfg, opts);
    REQUIRE_FALSE(report.mismatches.empty());
    for (const auto& m : report.mismatches) {
        CHECK(disagree(m.reproducer, kBroken));
        CHECK(m.reproducer.size() <= generate_case(cfg, m.index).size());
    }
}

TEST_CASE("fuzzing agrees with the oracle") {
    FuzzConfig cfg;
    cfg.case_count = 100000;
    DiffOptions opts;
    opts.threads = 2;
    const auto report = fuzz(cfg, opts);
    CHECK(report.ok());
    CHECK(report.inputs_tested == 100000);
    CHECK(report.seed == 0u);
}

TEST_CASE("quote and letter heavy fuzzing exercises the fallback") {
    FuzzConfig cfg;
    cfg.seed = 5;
    cfg.case_count = 20000;
    cfg.category_weights = {0, 0, 1, 0, 1, 0, 0, 0};
    std::size_t fallbacks = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto text = generate_case(cfg, i);
        for (auto s : pretokenize_strings(text))
            if (s.size() > 1 && s[0] == '\'' && s.size() > 3) ++fallbacks;
    }
    CHECK(fallbacks > 0);
    CHECK(fuzz(cfg).ok());
}

TEST_CASE("generation is a pure function of seed and index") {
    FuzzConfig cfg;
    cfg.seed = 99;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto a = generate_case(cfg, i);
        CHECK(a == generate_case(cfg, i));
        CHECK(utf8::is_valid(a));
        CHECK(utf8::decode_all(a).size() <= cfg.max_len);
    }
    FuzzConfig other = cfg;
    other.seed = 100;
    CHECK(generate_case(cfg, 0) != generate_case(other, 0));

    cfg.case_count = 300;
    DiffOptions one, four;
    four.threads = 4;
    one.table = four.table = kBroken;
    const auto a = fuzz(cfg, one);
    const auto b = fuzz(cfg, four);
    REQUIRE(a.mismatches.size() == b.mismatches.size());
    for (std::size_t i = 0; i < a.mismatches.size(); ++i) {
        CHECK(a.mismatches[i].index == b.mismatches[i].index);
        CHECK(a.mismatches[i].reproducer == b.mismatches[i].reproducer);
    }
}

TEST_CASE("weights validation") {
    FuzzConfig cfg;
    cfg.category_weights = {0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.category_weights = {1, -1, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.category_weights = {0, 0, 0, 0, 0, 0, 0, 2};
    CHECK_NOTHROW(cfg.validate());
    cfg.max_len = 0;
    CHECK_THROWS_AS(fuzz(cfg), std::invalid_argument);
}

TEST_CASE("report format") {
    DiffOptions opts;
    opts.table = kBroken;
    const auto report = diff_corpus({"'quick"}, opts);
    std::ostringstream os;
    write_report(os, report);
    std::istringstream lines(os.str());
    std::string line;
    std::vector<nlohmann::json> records;
    while (std::getline(lines, line)) records.push_back(nlohmann::json::parse(line));
    REQUIRE(records.size() == 2);
    CHECK(records[0]["index"] == 0);
    CHECK(records[0]["reproducer"].is_string());
    const auto& summary = records[1]["summary"];
    CHECK(summary["mismatches"] == 1);
    CHECK(summary["inputs_tested"] == 1);
    CHECK(summary["unicode_version"] == "14.0");
    CHECK(summary["seed"].is_null());
}

TEST_CASE("read_corpus splits on newlines") {
    std::istringstream in("one\ntwo\r\n\nthree\n");
    const auto docs = read_corpus(in);
    CHECK(docs == std::vector<std::string>{"one", "two\r", "", "three"});
}

}  // TEST_SUITE
