#include "peek2/oracle.hpp"

#include <unicode/regex.h>
#include <unicode/utext.h>
#include <unicode/uversion.h>

#include <stdexcept>

#include "peek2/ucd_extract.hpp"
#include "peek2/utf8.hpp"

namespace peek2::oracle {
namespace {

std::unique_ptr<icu::RegexPattern> compile(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    UParseError parse_error{};
    std::unique_ptr<icu::RegexPattern> pattern(icu::RegexPattern::compile(
        icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
        0, parse_error, status));
    if (U_FAILURE(status)) {
        throw std::runtime_error("cannot compile oracle pattern: " + std::string(u_errorName(status)) +
                                 " at offset " + std::to_string(parse_error.offset));
    }
    return pattern;
}

const icu::RegexPattern& full_pattern() {
    static const auto pattern = compile(kPattern);
    return *pattern;
}

const std::vector<std::unique_ptr<icu::RegexPattern>>& alternative_patterns() {
    static const auto patterns = [] {
        std::vector<std::unique_ptr<icu::RegexPattern>> out;
        for (const auto& alt : pattern_alternatives()) out.push_back(compile(alt));
        return out;
    }();
    return patterns;
}

// UTF-8 backed UText; match indices are then byte offsets.
class Utf8Text {
public:
    explicit Utf8Text(std::string_view text) {
        UErrorCode status = U_ZERO_ERROR;
        ut_ = utext_openUTF8(nullptr, text.data(), static_cast<int64_t>(text.size()), &status);
        if (U_FAILURE(status)) throw std::runtime_error("utext_openUTF8 failed");
    }
    ~Utf8Text() { utext_close(ut_); }
    Utf8Text(const Utf8Text&) = delete;
    Utf8Text& operator=(const Utf8Text&) = delete;

    UText* get() const noexcept { return ut_; }

private:
    UText* ut_ = nullptr;
};

std::unique_ptr<icu::RegexMatcher> make_matcher(const icu::RegexPattern& pattern) {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::RegexMatcher> m(pattern.matcher(status));
    if (U_FAILURE(status)) throw std::runtime_error("cannot create regex matcher");
    return m;
}

}  // namespace

std::string engine_name() { return std::string("ICU ") + U_ICU_VERSION; }

std::string unicode_version() { return ucd::icu_unicode_version(); }

struct OracleSplitter::Impl {
    std::unique_ptr<icu::RegexPattern> owned;
    std::unique_ptr<icu::RegexMatcher> matcher;
};

OracleSplitter::OracleSplitter() : impl_(std::make_unique<Impl>()) {
    impl_->matcher = make_matcher(full_pattern());
}

OracleSplitter::OracleSplitter(std::string_view pattern) : impl_(std::make_unique<Impl>()) {
    impl_->owned = compile(pattern);
    impl_->matcher = make_matcher(*impl_->owned);
}
OracleSplitter::~OracleSplitter() = default;
OracleSplitter::OracleSplitter(OracleSplitter&&) noexcept = default;
OracleSplitter& OracleSplitter::operator=(OracleSplitter&&) noexcept = default;

std::vector<Segment> OracleSplitter::split(std::string_view text) {
    utf8::validate(text);
    std::vector<Segment> out;
    if (text.empty()) return out;

    const Utf8Text ut(text);
    UErrorCode status = U_ZERO_ERROR;
    auto& m = *impl_->matcher;
    m.reset(ut.get());
    std::size_t covered = 0;
    while (m.find(status)) {
        const auto start = static_cast<std::size_t>(m.start64(status));
        const auto end = static_cast<std::size_t>(m.end64(status));
        if (U_FAILURE(status)) throw std::runtime_error("regex match failed");
        if (start != covered || end <= start) throw OracleGap(covered);
        out.push_back({start, end});
        covered = end;
    }
    if (U_FAILURE(status)) throw std::runtime_error("regex find failed");
    if (covered != text.size()) throw OracleGap(covered);
    // Detach before the UText goes away.
    m.reset(icu::UnicodeString());
    return out;
}

std::vector<Segment> oracle_split(std::string_view text) {
    thread_local OracleSplitter splitter;
    return splitter.split(text);
}

std::vector<std::size_t> dialect_disagreements(const std::vector<std::string>& documents) {
    OracleSplitter verbatim;
    OracleSplitter deployed(kDeployedPattern);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (!utf8::is_valid(documents[i])) continue;
        if (verbatim.split(documents[i]) != deployed.split(documents[i])) out.push_back(i);
    }
    return out;
}

std::vector<std::string> pattern_alternatives(std::string_view pattern) {
    std::vector<std::string> out;
    std::string current;
    int paren_depth = 0;
    bool in_class = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const char c = pattern[i];
        if (c == '\\' && i + 1 < pattern.size()) {
            current += c;
            current += pattern[++i];
            continue;
        }
        if (in_class) {
            if (c == ']') in_class = false;
        } else if (c == '[') {
            in_class = true;
        } else if (c == '(') {
            ++paren_depth;
        } else if (c == ')') {
            --paren_depth;
        } else if (c == '|' && paren_depth == 0) {
            out.push_back(std::move(current));
            current.clear();
            continue;
        }
        current += c;
    }
    out.push_back(std::move(current));
    return out;
}

Branch branch_of_alternative(std::size_t index) {
    switch (index) {
        case 0: return Branch::contraction;
        case 1: return Branch::word;
        case 2: return Branch::number;
        case 3: return Branch::punctuation;
        default: return Branch::whitespace;
    }
}

std::optional<AlternativeMatch> first_alternative(std::string_view text) {
    utf8::validate(text);
    if (text.empty()) return std::nullopt;
    const Utf8Text ut(text);
    const auto& patterns = alternative_patterns();
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        auto m = make_matcher(*patterns[i]);
        UErrorCode status = U_ZERO_ERROR;
        m->reset(ut.get());
        if (m->lookingAt(status) && U_SUCCESS(status)) {
            return AlternativeMatch{i, static_cast<std::size_t>(m->end64(status))};
        }
    }
    return std::nullopt;
}

}  // namespace peek2::oracle
