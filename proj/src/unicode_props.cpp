#include "peek2/unicode_props.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace peek2 {
namespace tables {
#include "unicode_tables.inc"
}  // namespace tables

namespace {

struct ClassRange {
    char32_t first;
    char32_t last;
    ScalarClass cls;
};

// Direct lookup for the BMP, binary search over merged ranges above it.
class ClassIndex {
public:
    ClassIndex() {
        bmp_.fill(ScalarClass::other);
        add(tables::kLetterRanges, ScalarClass::letter);
        add(tables::kNumberRanges, ScalarClass::number);
        add(tables::kWhitespaceRanges, ScalarClass::whitespace);
        std::sort(astral_.begin(), astral_.end(),
                  [](const ClassRange& a, const ClassRange& b) { return a.first < b.first; });
    }

    ScalarClass lookup(char32_t c) const noexcept {
        if (c < bmp_.size()) return bmp_[c];
        auto it = std::upper_bound(astral_.begin(), astral_.end(), c,
                                   [](char32_t v, const ClassRange& r) { return v < r.first; });
        if (it == astral_.begin()) return ScalarClass::other;
        --it;
        return c <= it->last ? it->cls : ScalarClass::other;
    }

private:
    template <std::size_t N>
    void add(const ScalarRange (&ranges)[N], ScalarClass cls) {
        for (const auto& r : ranges) {
            for (char32_t c = r.first; c <= r.last && c < bmp_.size(); ++c) bmp_[c] = cls;
            if (r.last >= bmp_.size()) {
                astral_.push_back({std::max<char32_t>(r.first, bmp_.size()), r.last, cls});
            }
        }
    }

    std::array<ScalarClass, 0x10000> bmp_{};
    std::vector<ClassRange> astral_;
};

const ClassIndex& class_index() {
    static const ClassIndex index;
    return index;
}

}  // namespace

const ScalarClassTables& scalar_class_tables() noexcept {
    static const ScalarClassTables t{tables::kLetterRanges, tables::kNumberRanges,
                                     tables::kWhitespaceRanges, tables::kContractionFolds,
                                     tables::kUnicodeVersion};
    return t;
}

std::string_view unicode_version() noexcept { return tables::kUnicodeVersion; }

ScalarClass scalar_class(char32_t scalar) noexcept { return class_index().lookup(scalar); }

char32_t contraction_fold(char32_t scalar) noexcept {
    const auto& folds = tables::kContractionFolds;
    auto it = std::lower_bound(std::begin(folds), std::end(folds), scalar,
                               [](const FoldEntry& e, char32_t v) { return e.scalar < v; });
    return it != std::end(folds) && it->scalar == scalar ? it->folded : 0;
}

}  // namespace peek2
