#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "peek2/bpe.hpp"
#include "peek2/differential.hpp"
#include "peek2/errors.hpp"
#include "peek2/oracle.hpp"
#include "peek2/pretokenizer.hpp"
#include "peek2/unicode_props.hpp"

namespace py = pybind11;

namespace {

// str arguments arrive as UTF-8; bytes are passed through and validated.
std::string as_utf8(const py::object& text) {
    if (py::isinstance<py::bytes>(text)) return text.cast<std::string>();
    if (py::isinstance<py::str>(text)) return text.cast<std::string>();
    throw py::type_error("expected str or bytes");
}

using Offsets = std::vector<std::pair<std::size_t, std::size_t>>;

Offsets to_pairs(const std::vector<peek2::Segment>& segments) {
    Offsets out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.emplace_back(s.start, s.end);
    return out;
}

py::dict summarize(const peek2::diff::DiffReport& r) {
    py::dict d;
    d["inputs_tested"] = r.inputs_tested;
    d["scalars_tested"] = r.scalars_tested;
    py::list mismatches;
    for (const auto& m : r.mismatches) {
        py::dict md;
        md["index"] = m.index;
        md["first_divergent_offset"] = m.first_divergent_offset;
        md["reproducer"] = py::bytes(m.reproducer);
        mismatches.append(md);
    }
    d["mismatches"] = mismatches;
    d["seed"] = r.seed ? py::object(py::int_(*r.seed)) : py::object(py::none());
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Regex-free cl100k-style pretokenizer (byte offsets into the UTF-8 encoding)";

    py::register_exception<peek2::InvalidUtf8>(m, "InvalidUtf8", PyExc_ValueError);
    py::register_exception<peek2::InvalidModel>(m, "InvalidModel", PyExc_ValueError);
    py::register_exception<peek2::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<peek2::OracleGap>(m, "OracleGap", PyExc_RuntimeError);

    m.def("unicode_version", [] { return std::string(peek2::unicode_version()); });
    m.def("oracle_engine", &peek2::oracle::engine_name);
    m.attr("ORACLE_PATTERN") = std::string(peek2::oracle::kPattern);

    m.def("peek_categorize", [](std::uint32_t scalar) {
        return static_cast<int>(peek2::peek_categorize(static_cast<char32_t>(scalar)));
    }, py::arg("scalar"));
    m.def("decide_branch", [](int cat0, int cat1) {
        if (cat0 < 0 || cat0 > 6 || cat1 < 0 || cat1 > 7)
            throw py::value_error("categories are 0..6, second may be 7 (end of input)");
        return static_cast<int>(peek2::decide_branch(static_cast<peek2::Category>(cat0),
                                                     static_cast<peek2::Category>(cat1)));
    }, py::arg("cat0"), py::arg("cat1"));

    m.def("pretokenize", [](const py::object& text) {
        const auto s = as_utf8(text);
        py::gil_scoped_release release;
        return to_pairs(peek2::pretokenize(s));
    }, py::arg("text"), "Segments as (start, end) byte offsets");
    m.def("pretokenize_strings", [](const std::string& text) {
        std::vector<std::string> out;
        for (auto sv : peek2::pretokenize_strings(text)) out.emplace_back(sv);
        return out;
    }, py::arg("text"));
    m.def("oracle_split", [](const py::object& text) {
        const auto s = as_utf8(text);
        py::gil_scoped_release release;
        return to_pairs(peek2::oracle::oracle_split(s));
    }, py::arg("text"));

    m.def("diff_corpus", [](const std::vector<std::string>& docs, unsigned threads) {
        peek2::diff::DiffOptions opts;
        opts.threads = threads;
        peek2::diff::DiffReport r;
        {
            py::gil_scoped_release release;
            r = peek2::diff::diff_corpus(docs, opts);
        }
        return summarize(r);
    }, py::arg("documents"), py::arg("threads") = 1);
    m.def("fuzz", [](std::uint64_t seed, std::size_t cases, std::size_t max_len, unsigned threads) {
        peek2::diff::FuzzConfig cfg;
        cfg.seed = seed;
        cfg.case_count = cases;
        cfg.max_len = max_len;
        peek2::diff::DiffOptions opts;
        opts.threads = threads;
        peek2::diff::DiffReport r;
        {
            py::gil_scoped_release release;
            r = peek2::diff::fuzz(cfg, opts);
        }
        return summarize(r);
    }, py::arg("seed") = 0, py::arg("cases") = 1000, py::arg("max_len") = 64, py::arg("threads") = 1);

    using peek2::bpe::BpeModel;
    py::class_<BpeModel>(m, "BpeModel")
        .def_static("byte_level", &BpeModel::byte_level)
        .def_static("load", [](const std::string& vocab, const std::string& merges) {
            return peek2::bpe::load_model(std::filesystem::path(vocab), std::filesystem::path(merges));
        }, py::arg("vocab_path"), py::arg("merges_path"))
        .def_static("train", [](const std::vector<std::string>& corpus, std::size_t vocab_size,
                                std::uint64_t min_frequency, unsigned threads) {
            peek2::bpe::TrainConfig cfg;
            cfg.vocab_size = vocab_size;
            cfg.min_frequency = min_frequency;
            cfg.threads = threads;
            py::gil_scoped_release release;
            return peek2::bpe::train_bpe(corpus, cfg);
        }, py::arg("corpus"), py::arg("vocab_size"), py::arg("min_frequency") = 2, py::arg("threads") = 1)
        .def("save", [](const BpeModel& self, const std::string& vocab, const std::string& merges) {
            peek2::bpe::save_model(self, vocab, merges);
        }, py::arg("vocab_path"), py::arg("merges_path"))
        .def_property_readonly("vocab_size", &BpeModel::vocab_size)
        .def_property_readonly("merge_count", [](const BpeModel& self) { return self.merges().size(); })
        .def("encode", [](const BpeModel& self, const py::object& text) {
            const auto s = as_utf8(text);
            peek2::bpe::Encoding enc;
            {
                py::gil_scoped_release release;
                enc = peek2::bpe::encode(self, s);
            }
            return py::make_tuple(enc.ids, to_pairs(enc.offsets));
        }, py::arg("text"), "Returns (ids, offsets)")
        .def("encode_batch", [](const BpeModel& self, const std::vector<std::string>& docs, unsigned threads) {
            std::vector<std::vector<peek2::bpe::TokenId>> out;
            {
                py::gil_scoped_release release;
                for (auto& enc : peek2::bpe::encode_batch(self, docs, threads)) out.push_back(std::move(enc.ids));
            }
            return out;
        }, py::arg("documents"), py::arg("threads") = 0)
        .def("decode", [](const BpeModel& self, const std::vector<peek2::bpe::TokenId>& ids) {
            return py::bytes(peek2::bpe::decode(self, ids));
        }, py::arg("ids"));
}
