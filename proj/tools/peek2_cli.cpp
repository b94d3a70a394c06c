// peek2: split, diff, fuzz, encode, train and bench over files or stdio.
//
// Exit status: 0 success, 1 conformance mismatch (diff/fuzz), 2 usage or
// input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "peek2/bench.hpp"
#include "peek2/bpe.hpp"
#include "peek2/differential.hpp"
#include "peek2/errors.hpp"
#include "peek2/oracle.hpp"
#include "peek2/pretokenizer.hpp"
#include "peek2/text_escape.hpp"

#ifndef PEEK2_DEFAULT_CORPUS
#define PEEK2_DEFAULT_CORPUS ""
#endif

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> read_documents(const std::string& path) {
    std::istringstream in(read_all(path));
    return peek2::diff::read_corpus(in);
}

// Writes to stdout for "-", else to the named file.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

peek2::bpe::Backend parse_impl(const std::string& impl) {
    return impl == "oracle" ? peek2::bpe::Backend::oracle : peek2::bpe::Backend::peek2;
}

peek2::bpe::BpeModel load_or_default(const std::string& vocab, const std::string& merges) {
    if (vocab.empty() != merges.empty()) throw UsageError("--vocab and --merges go together");
    if (vocab.empty()) return peek2::bpe::BpeModel::byte_level();
    return peek2::bpe::load_model(vocab, merges);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regex-free cl100k-style pretokenizer with a regex reference oracle"};
    app.require_subcommand(1);

    std::string impl = "peek2";
    std::string input = "-";
    std::string output = "-";
    bool offsets = false;
    std::uint64_t seed = 0;
    std::size_t cases = 100000;
    std::size_t max_len = 64;
    std::vector<double> weights;
    int repetitions = 5;
    unsigned threads = 1;
    std::string vocab_path;
    std::string merges_path;
    std::size_t vocab_size = 1024;
    std::uint64_t min_frequency = 2;
    std::string jsonl_path;
    std::vector<std::string> task_names;
    std::string bench_input = PEEK2_DEFAULT_CORPUS;

    const auto impl_check = CLI::IsMember({"peek2", "oracle"});

    auto* split_cmd = app.add_subcommand("split", "Print the segments of the input, one per line");
    split_cmd->add_option("--impl", impl, "Splitter backend")->check(impl_check);
    split_cmd->add_option("--input", input, "Input file, - for stdin");
    split_cmd->add_option("--output", output, "Output file, - for stdout");
    split_cmd->add_flag("--offsets", offsets, "Print 'start end' byte offsets instead of text");

    auto* diff_cmd = app.add_subcommand("diff", "Compare peek2 and oracle on a corpus (one document per line)");
    diff_cmd->add_option("--corpus,--input", input, "Corpus file, - for stdin");
    diff_cmd->add_option("--output", output, "Report (JSON lines)");
    diff_cmd->add_option("--threads", threads, "Worker threads");
    bool dialects = false;
    diff_cmd->add_flag("--dialects", dialects,
                       "Also list documents the deployed cl100k variant splits differently (stderr)");

    auto* fuzz_cmd = app.add_subcommand("fuzz", "Randomized differential testing");
    fuzz_cmd->add_option("--seed", seed, "Generator seed");
    fuzz_cmd->add_option("--cases", cases, "Number of generated inputs");
    fuzz_cmd->add_option("--max-len", max_len, "Maximum scalars per input");
    fuzz_cmd->add_option("--weights", weights,
                         "8 bucket weights: other space quote linefold letter whitespace number boundary")
        ->expected(8)
        ->delimiter(',');
    fuzz_cmd->add_option("--threads", threads, "Worker threads");
    fuzz_cmd->add_option("--output", output, "Report (JSON lines)");

    auto* encode_cmd = app.add_subcommand("encode", "Byte-level BPE encode");
    encode_cmd->add_option("--impl", impl, "Splitter backend")->check(impl_check);
    encode_cmd->add_option("--input", input, "Input file, - for stdin");
    encode_cmd->add_option("--output", output, "Output file, - for stdout");
    encode_cmd->add_option("--vocab", vocab_path, "vocab.json (default: bare byte alphabet)");
    encode_cmd->add_option("--merges", merges_path, "merges.txt");
    encode_cmd->add_flag("--offsets", offsets, "Print 'id start end' per token");

    auto* train_cmd = app.add_subcommand("train", "Train a byte-level BPE model");
    train_cmd->add_option("--impl", impl, "Splitter backend")->check(impl_check);
    train_cmd->add_option("--input", input, "Corpus, one document per line");
    train_cmd->add_option("--vocab-size", vocab_size, "Target vocabulary size")->check(CLI::Range(256, 1 << 24));
    train_cmd->add_option("--min-frequency", min_frequency, "Stop when the best pair is rarer");
    train_cmd->add_option("--threads", threads, "Threads for segment counting");
    train_cmd->add_option("--vocab", vocab_path, "Output vocab.json")->required();
    train_cmd->add_option("--merges", merges_path, "Output merges.txt")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Time the task suite for both backends");
    bench_cmd->add_option("--corpus,--input", bench_input, "Corpus, one document per line")->capture_default_str();
    bench_cmd->add_option("--repetitions", repetitions, "Timed repetitions per task")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--threads", threads, "Threads for encode-batch and train");
    bench_cmd->add_option("--vocab", vocab_path, "vocab.json (default: train one on the corpus)");
    bench_cmd->add_option("--merges", merges_path, "merges.txt");
    bench_cmd->add_option("--vocab-size", vocab_size, "Vocabulary size for training");
    bench_cmd->add_option("--tasks", task_names, "Subset of tasks")
        ->check(CLI::IsMember({"pretokenize-only", "encode", "encode-offsets", "encode-batch", "train"}))
        ->delimiter(',');
    bench_cmd->add_option("--output", output, "Table output");
    bench_cmd->add_option("--jsonl", jsonl_path, "Also write JSON-lines records here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*split_cmd) {
            const std::string text = read_all(input);
            const auto segments = parse_impl(impl) == peek2::bpe::Backend::oracle
                                      ? peek2::oracle::oracle_split(text)
                                      : peek2::pretokenize(text);
            Output out(output);
            for (const auto& s : segments) {
                if (offsets) {
                    out.stream() << s.start << ' ' << s.end << '\n';
                } else {
                    out.stream() << peek2::escape_segment(std::string_view(text).substr(s.start, s.size()))
                                 << '\n';
                }
            }
            return 0;
        }

        if (*diff_cmd) {
            peek2::diff::DiffOptions opts;
            opts.threads = threads;
            const auto documents = read_documents(input);
            const auto report = peek2::diff::diff_corpus(documents, opts);
            if (dialects) {
                for (auto i : peek2::oracle::dialect_disagreements(documents))
                    std::cerr << "dialect disagreement: document " << i << "\n";
            }
            Output out(output);
            peek2::diff::write_report(out.stream(), report);
            return report.ok() ? 0 : kExitMismatch;
        }

        if (*fuzz_cmd) {
            peek2::diff::FuzzConfig cfg;
            cfg.seed = seed;
            cfg.case_count = cases;
            cfg.max_len = max_len;
            if (!weights.empty()) std::copy(weights.begin(), weights.end(), cfg.category_weights.begin());
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            peek2::diff::DiffOptions opts;
            opts.threads = threads;
            const auto report = peek2::diff::fuzz(cfg, opts);
            Output out(output);
            peek2::diff::write_report(out.stream(), report);
            return report.ok() ? 0 : kExitMismatch;
        }

        if (*encode_cmd) {
            const auto model = load_or_default(vocab_path, merges_path);
            const std::string text = read_all(input);
            const auto enc = peek2::bpe::encode(model, text, parse_impl(impl));
            Output out(output);
            if (offsets) {
                for (std::size_t i = 0; i < enc.ids.size(); ++i) {
                    out.stream() << enc.ids[i] << ' ' << enc.offsets[i].start << ' '
                                 << enc.offsets[i].end << '\n';
                }
            } else {
                for (std::size_t i = 0; i < enc.ids.size(); ++i)
                    out.stream() << (i ? " " : "") << enc.ids[i];
                out.stream() << '\n';
            }
            return 0;
        }

        if (*train_cmd) {
            peek2::bpe::TrainConfig cfg;
            cfg.vocab_size = vocab_size;
            cfg.min_frequency = min_frequency;
            cfg.threads = threads;
            cfg.backend = parse_impl(impl);
            const auto docs = read_documents(input);
            if (docs.empty()) throw UsageError("training corpus is empty");
            const auto model = peek2::bpe::train_bpe(docs, cfg);
            peek2::bpe::save_model(model, vocab_path, merges_path);
            std::cerr << "trained " << model.vocab_size() << " tokens, " << model.merges().size()
                      << " merges\n";
            return 0;
        }

        if (*bench_cmd) {
            auto corpus = std::make_shared<peek2::bench::Corpus>();
            corpus->name = bench_input;
            corpus->documents = read_documents(bench_input);

            std::shared_ptr<const peek2::bpe::BpeModel> model;
            if (!vocab_path.empty() || !merges_path.empty()) {
                model = std::make_shared<peek2::bpe::BpeModel>(load_or_default(vocab_path, merges_path));
            } else if (!corpus->documents.empty()) {
                peek2::bpe::TrainConfig cfg;
                cfg.vocab_size = vocab_size;
                model = std::make_shared<peek2::bpe::BpeModel>(peek2::bpe::train_bpe(corpus->documents, cfg));
            }

            using peek2::bench::TaskKind;
            std::vector<TaskKind> kinds{TaskKind::pretokenize_only, TaskKind::encode,
                                        TaskKind::encode_offsets, TaskKind::encode_batch, TaskKind::train};
            if (!task_names.empty()) {
                std::erase_if(kinds, [&](TaskKind k) {
                    return std::find(task_names.begin(), task_names.end(),
                                     peek2::bench::task_name(k)) == task_names.end();
                });
            }
            std::vector<peek2::bench::BenchTask> tasks;
            for (auto kind : kinds) {
                for (auto backend : {peek2::bpe::Backend::oracle, peek2::bpe::Backend::peek2}) {
                    peek2::bench::BenchTask t;
                    t.kind = kind;
                    t.backend = backend;
                    t.corpus = corpus;
                    t.model = model;
                    t.repetitions = repetitions;
                    t.threads = threads;
                    t.train_vocab_size = vocab_size;
                    tasks.push_back(std::move(t));
                }
            }
            const auto report = peek2::bench::run_bench(tasks);
            Output out(output);
            out.stream() << peek2::bench::format_table(report);
            if (!jsonl_path.empty()) {
                Output jsonl(jsonl_path);
                peek2::bench::write_jsonl(jsonl.stream(), report);
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const peek2::InvalidUtf8& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const peek2::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const peek2::InvalidModel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const peek2::MissingFixture& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const peek2::OracleGap& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return kExitMismatch;
    }
    return 0;
}
