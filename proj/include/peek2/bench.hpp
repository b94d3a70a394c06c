#pragma once

// Throughput harness for the tokenizer task suite (pretokenize-only, encode,
// encode with offsets, batch encode, vocabulary training), run once per
// splitter backend.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peek2/bpe.hpp"

namespace peek2::bench {

enum class TaskKind { pretokenize_only, encode, encode_offsets, encode_batch, train };

std::string_view task_name(TaskKind kind) noexcept;

struct Corpus {
    std::string name;
    std::vector<std::string> documents;

    std::size_t bytes() const noexcept;
};

struct BenchTask {
    TaskKind kind = TaskKind::pretokenize_only;
    bpe::Backend backend = bpe::Backend::peek2;
    std::shared_ptr<const Corpus> corpus;
    std::shared_ptr<const bpe::BpeModel> model;  // encode tasks
    int repetitions = 5;                         // >= 3
    int warmup = 1;
    unsigned threads = 1;             // encode-batch and train
    std::size_t train_vocab_size = 1024;
};

struct TaskResult {
    TaskKind kind;
    bpe::Backend backend;
    std::string corpus;
    std::size_t input_bytes = 0;
    unsigned threads = 1;
    std::vector<double> samples_ms;
    double mean_ms = 0;
    double std_error_ms = 0;     // sample standard deviation / sqrt(n)
    double throughput_mb_s = 0;  // input bytes / mean time, 1 MB = 1e6 bytes
};

/// Throughput of peek2 over the oracle for one task, from raw samples.
struct TaskRatio {
    TaskKind kind;
    double ratio;
    std::optional<double> reference;  // published ratio for the same task shape
};

struct BenchReport {
    std::vector<TaskResult> results;  // in task order
    std::vector<TaskRatio> ratios;
};

/// Milliseconds from an arbitrary epoch. Defaults to std::chrono::steady_clock.
using Clock = std::function<double()>;

/// Throws MissingFixture for an absent or empty corpus, a missing model on an
/// encode task, or repetitions < 3; ClockError when a sample goes negative.
BenchReport run_bench(const std::vector<BenchTask>& tasks, const Clock& clock = {});

/// Executes one repetition of `task` without timing. Returns a checksum of
/// the work (token or segment count) so it cannot be optimized away.
std::uint64_t run_once(const BenchTask& task);

double mean(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);

/// Throughput / time / standard-error columns, one row per task.
std::string format_table(const BenchReport& report);

/// One JSON object per task result, then one per ratio.
void write_jsonl(std::ostream& out, const BenchReport& report);

}  // namespace peek2::bench
