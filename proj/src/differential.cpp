#include "peek2/differential.hpp"

#include <algorithm>
#include <exception>
#include <istream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "peek2/oracle.hpp"
#include "peek2/unicode_props.hpp"
#include "peek2/utf8.hpp"

namespace peek2::diff {
namespace {

// Per-bucket alphabets. The "other" bucket additionally draws uniformly
// random scalars a quarter of the time.
const std::u32string kOther =
    U"!\"#$%&()*+,-./:;<=>?@[\\]^_`{|}~"
    U"\u00BF\u00B7\u2014\u201C\u201D\u2019\u0301\u200B\uFEFF\u3001\u300C"
    U"\U0001F600\U0001F44D";
const std::u32string kSpace = U" ";
const std::u32string kQuote = U"'";
const std::u32string kLineFold = U"\r\n";
const std::u32string kLetter =
    U"sdmtlvreSDMTLVREabxyzQ"
    U"\u00E9\u4E2D\u0436\u03B1\u0639\u017F\u212A\u01C5\u02B0\u3042\uAC00";
const std::u32string kWhitespace =
    U"\t\v\f\u0085\u00A0\u1680\u2000\u2009\u2028\u2029\u202F\u205F\u3000";
const std::u32string kNumber =
    U"0123456789\u0663\uFF12\u216B\u00B2\u00BD\U0001D7D9";
const std::u32string kBoundary =
    U"'\u2019\u017F\u212A\u00A0\u2028\u2029\u3000\v\f\u0301\u0300\u20DD"
    U"\u2160\u00BC\u0085 \r\n";

const std::array<const std::u32string*, kBucketCount> kAlphabets{
    &kOther, &kSpace, &kQuote, &kLineFold, &kLetter, &kWhitespace, &kNumber, &kBoundary};

std::uint64_t count_scalars(std::string_view text) {
    return static_cast<std::uint64_t>(std::count_if(text.begin(), text.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

bool splitters_disagree(std::string_view text, const DecisionTable& table,
                        oracle::OracleSplitter& oracle) {
    return boundaries(pretokenize(text, table)) != boundaries(oracle.split(text));
}

std::string excerpt_around(std::string_view text, std::size_t offset) {
    constexpr std::size_t kRadius = 24;
    auto is_start = [&](std::size_t i) {
        return i >= text.size() || (static_cast<unsigned char>(text[i]) & 0xC0) != 0x80;
    };
    std::size_t lo = offset > kRadius ? offset - kRadius : 0;
    std::size_t hi = std::min(text.size(), offset + kRadius);
    while (lo > 0 && !is_start(lo)) --lo;
    while (hi < text.size() && !is_start(hi)) ++hi;
    return std::string(text.substr(lo, hi - lo));
}

struct CaseResult {
    std::optional<Mismatch> mismatch;
    std::optional<InvalidDocument> invalid;
    std::uint64_t scalars = 0;
};

CaseResult check_case(std::string_view text, std::size_t index, const DiffOptions& options,
                      oracle::OracleSplitter& oracle) {
    CaseResult result;
    try {
        utf8::validate(text);
    } catch (const InvalidUtf8& e) {
        result.invalid = InvalidDocument{index, e.offset()};
        return result;
    }
    result.scalars = count_scalars(text);
    auto peek2_b = boundaries(pretokenize(text, options.table));
    auto oracle_b = boundaries(oracle.split(text));
    const auto divergence = first_divergence(peek2_b, oracle_b);
    if (!divergence) return result;

    Mismatch m;
    m.index = index;
    m.first_divergent_offset = *divergence;
    m.excerpt = excerpt_around(text, *divergence);
    m.peek2_boundaries = std::move(peek2_b);
    m.oracle_boundaries = std::move(oracle_b);
    m.reproducer = options.shrink
                       ? shrink(text,
                                [&](std::string_view candidate) {
                                    return splitters_disagree(candidate, options.table, oracle);
                                })
                       : std::string(text);
    result.mismatch = std::move(m);
    return result;
}

// Runs `produce(i)` for i in [0, count) on `threads` workers (strided), each
// with its own oracle matcher, and folds results into a report sorted by
// index. The first exception thrown by any worker is rethrown.
template <typename Produce>
DiffReport run_cases(std::size_t count, const DiffOptions& options, Produce produce) {
    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, count ? count : 1));
    std::vector<DiffReport> partial(workers);
    std::vector<std::exception_ptr> errors(workers);

    auto work = [&](unsigned w) {
        try {
            oracle::OracleSplitter oracle;
            auto& rep = partial[w];
            for (std::size_t i = w; i < count; i += workers) {
                const std::string input = produce(i);
                auto r = check_case(input, i, options, oracle);
                ++rep.inputs_tested;
                rep.scalars_tested += r.scalars;
                if (r.mismatch) rep.mismatches.push_back(std::move(*r.mismatch));
                if (r.invalid) rep.invalid_documents.push_back(*r.invalid);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    DiffReport report;
    for (auto& rep : partial) {
        report.inputs_tested += rep.inputs_tested;
        report.scalars_tested += rep.scalars_tested;
        std::move(rep.mismatches.begin(), rep.mismatches.end(),
                  std::back_inserter(report.mismatches));
        report.invalid_documents.insert(report.invalid_documents.end(),
                                        rep.invalid_documents.begin(), rep.invalid_documents.end());
    }
    std::sort(report.mismatches.begin(), report.mismatches.end(),
              [](const Mismatch& a, const Mismatch& b) { return a.index < b.index; });
    std::sort(report.invalid_documents.begin(), report.invalid_documents.end(),
              [](const InvalidDocument& a, const InvalidDocument& b) { return a.index < b.index; });
    return report;
}

}  // namespace

void FuzzConfig::validate() const {
    if (max_len == 0) throw std::invalid_argument("max_len must be positive");
    bool any_positive = false;
    for (double w : category_weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("category weights must be non-negative");
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw std::invalid_argument("at least one category weight must be positive");
}

std::optional<std::size_t> first_divergence(const std::vector<std::size_t>& a,
                                            const std::vector<std::size_t>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return std::min(a[i], b[i]);
    }
    if (a.size() != b.size()) return a.size() > n ? a[n] : b[n];
    return std::nullopt;
}

std::string shrink(std::string_view input,
                   const std::function<bool(std::string_view)>& still_fails) {
    std::u32string scalars = utf8::decode_all(input);
    std::size_t chunk = std::max<std::size_t>(1, scalars.size() / 2);
    for (;;) {
        bool progressed = false;
        for (std::size_t i = 0; i < scalars.size() && scalars.size() > 1;) {
            const std::size_t len = std::min(chunk, scalars.size() - i);
            if (len == scalars.size()) break;  // never drop everything
            std::u32string candidate = scalars.substr(0, i) + scalars.substr(i + len);
            if (still_fails(utf8::encode(candidate))) {
                scalars = std::move(candidate);
                progressed = true;
            } else {
                i += len;
            }
        }
        if (progressed) {
            chunk = std::min(chunk, std::max<std::size_t>(1, scalars.size() / 2));
        } else if (chunk == 1) {
            break;
        } else {
            chunk /= 2;
        }
    }
    return utf8::encode(scalars);
}

DiffReport diff_corpus(const std::vector<std::string>& documents, const DiffOptions& options) {
    return run_cases(documents.size(), options, [&](std::size_t i) { return documents[i]; });
}

std::string generate_case(const FuzzConfig& config, std::uint64_t index) {
    // One engine per case keeps cases independent of worker scheduling.
    std::mt19937_64 rng(config.seed ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    const double total =
        std::accumulate(config.category_weights.begin(), config.category_weights.end(), 0.0);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::size_t last_positive = 0;
    for (std::size_t b = 0; b < kBucketCount; ++b)
        if (config.category_weights[b] > 0.0) last_positive = b;

    const std::size_t len = 1 + static_cast<std::size_t>(rng() % config.max_len);
    std::u32string out;
    out.reserve(len);
    for (std::size_t k = 0; k < len; ++k) {
        double pick = unit() * total;
        std::size_t bucket = last_positive;
        for (std::size_t b = 0; b < kBucketCount; ++b) {
            const double w = config.category_weights[b];
            if (w > 0.0 && pick < w) {
                bucket = b;
                break;
            }
            pick -= w;
        }
        if (bucket == static_cast<std::size_t>(Bucket::other) && rng() % 4 == 0) {
            char32_t c;
            do {
                c = static_cast<char32_t>(rng() % 0x110000);
            } while (!is_scalar_value(c));
            out.push_back(c);
            continue;
        }
        const auto& alphabet = *kAlphabets[bucket];
        out.push_back(alphabet[rng() % alphabet.size()]);
    }
    return utf8::encode(out);
}

DiffReport fuzz(const FuzzConfig& config, const DiffOptions& options) {
    config.validate();
    auto report = run_cases(config.case_count, options,
                            [&](std::size_t i) { return generate_case(config, i); });
    report.seed = config.seed;
    return report;
}

std::vector<std::string> read_corpus(std::istream& in) {
    std::vector<std::string> docs;
    std::string line;
    while (std::getline(in, line)) docs.push_back(std::move(line));
    return docs;
}

void write_report(std::ostream& out, const DiffReport& report) {
    using nlohmann::json;
    const auto dump = [](const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); };
    for (const auto& m : report.mismatches) {
        json j;
        j["index"] = m.index;
        j["first_divergent_offset"] = m.first_divergent_offset;
        j["excerpt"] = m.excerpt;
        j["peek2"] = m.peek2_boundaries;
        j["oracle"] = m.oracle_boundaries;
        j["reproducer"] = m.reproducer;
        out << dump(j) << "\n";
    }
    json summary;
    summary["inputs_tested"] = report.inputs_tested;
    summary["scalars_tested"] = report.scalars_tested;
    summary["mismatches"] = report.mismatches.size();
    json invalid = json::array();
    for (const auto& d : report.invalid_documents)
        invalid.push_back({{"index", d.index}, {"byte_offset", d.byte_offset}});
    summary["invalid_documents"] = invalid;
    summary["seed"] = report.seed ? json(*report.seed) : json(nullptr);
    summary["engine"] = oracle::engine_name();
    summary["unicode_version"] = std::string(unicode_version());
    out << dump(json{{"summary", summary}}) << "\n";
}

}  // namespace peek2::diff
